import pytest

from oracles import numeric_portrait
from sharedpre.constellation import (align, cycle_type, fiber_product, genus, identity,
                                     monodromy_group, normalization_genus,
                                     normalization_genus_tuple_oracle, product)
from sharedpre.maps import INF, fiber_product_curve_factors, map_from_expr
from sharedpre.monodromy import branch_values, extract_monodromy, extract_monodromy_joint

MAPS = ["z^2", "z^3", "z^5", "(z+1)^2", "z+1/z", "z^3-3*z", "z^4+z^3", "z^4-4*z",
        "(z^3+z^(-3))/2", "(z^2+1)/(z^2-4)"]


def _oracle_types(expr):
    P = map_from_expr(expr)
    out = numeric_portrait([float(c) for c in P.num.rational_coeffs()],
                           [float(c) for c in P.den.rational_coeffs()])
    return sorted(out.values())


@pytest.mark.parametrize("expr", MAPS)
def test_extracted_constellation_matches_numeric_portrait(expr):
    c = extract_monodromy(map_from_expr(expr))
    assert product(c.perms, c.degree) == identity(c.degree)
    assert genus(c) == 0
    types = sorted(cycle_type(p) for p in c.perms if p != identity(c.degree))
    assert types == _oracle_types(expr)


@pytest.mark.parametrize("expr,order", [("z^3", 3), ("z+1/z", 2), ("(z^3+z^(-3))/2", 6),
                                        ("z^3-3*z", 6), ("z^4+z^3", 24), ("z^4-4*z", 24)])
def test_monodromy_group_orders(expr, order):
    assert monodromy_group(extract_monodromy(map_from_expr(expr))) == (order, False)


# g = 1 - |G| chi / 2 with chi from the signature: S3 with {2,2,3}, S4 with {2,2,2,4}
# and {2,3,4}, the dihedral group of order 4 with {2,2,2}
@pytest.mark.parametrize("expr,g", [("z^3-3*z", 0), ("z^4-4*z", 4), ("z^4+z^3", 0),
                                    ("(z^2+z^(-2))/2", 0)])
def test_normalization_genus_two_routes(expr, g):
    c = extract_monodromy(map_from_expr(expr))
    assert normalization_genus(c) == g
    assert normalization_genus_tuple_oracle(c) == g


def test_labels_of_conjugate_branch_values():
    c = extract_monodromy(map_from_expr("z^4-4*z"))
    labels = [str(b) for b in c.branch_points]
    assert labels.count("inf") == 1 and "-3" in labels
    assert sum("c^2 - 3*c + 9" in lab for lab in labels) == 2


def test_branch_values_cover_critical_values():
    bv = branch_values(map_from_expr("z^3-3*z"), 64)
    assert sorted(str(lab) for lab, _, _ in bv) == ["-2", "2", "inf"]
    assert any(val is INF for _, val, _ in bv)


def test_extraction_is_deterministic():
    P = map_from_expr("z^4+z^3")
    assert extract_monodromy(P).to_json() == extract_monodromy(P).to_json()


@pytest.mark.parametrize("p,q", [("z^2", "(z+1)^2"), ("z^2", "z^3"), ("z^2", "z+1/z"),
                                 ("z^3-3*z", "z^2"), ("z^2", "z^4")])
def test_fiber_product_components_match_curve_factors(p, q):
    P, Q = map_from_expr(p), map_from_expr(q)
    cs = align(extract_monodromy_joint([P, Q]))
    comps = fiber_product(cs)
    assert sum(len(c.orbit) for c in comps) == P.degree * Q.degree
    assert len(comps) == len(fiber_product_curve_factors(P, Q))
