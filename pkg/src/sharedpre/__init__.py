"""Rational maps of the sphere sharing preimages of infinite sets.

Exact fields and certified numerics, rational-map algebra, ramification
orbifolds, Galois coverings, constellations and orbit constructions.
"""

from .constellation import (Constellation, FiberComponent, align, fiber_product, genus,
                            monodromy_group, normalization_genus,
                            normalization_genus_tuple_oracle)
from .galois import (GaloisCertificate, TransformGroup, deck_group, is_galois,
                     quotient_map, standard_family)
from .maps import (INF, Moebius, RationalMap, common_right_factor_degree, compose,
                   critical_structure, fiber, left_factor, map_from_expr, moebius_from_expr)
from .monodromy import extract_monodromy, extract_monodromy_joint
from .orbifold import classify, euler_characteristic, ramification_orbifold
from .orbits import (construct_sets, finite_group_reduction, generators_for, orbit,
                     verify_shared_preimage)
from .scalar import QQ, QQI, ComplexBall, ExactScalar, FieldSpec, cyclotomic_field, embed

__version__ = "0.1.0"
