"""Ramification orbifolds of rational maps and the signature classifier."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .maps import AlgebraicPointSet, RationalMap, critical_structure
from .scalar import fraction_str

GENUS_LE_1 = "normalization_genus_le_1"
GENUS_GE_2 = "normalization_genus_ge_2"

# chi = 0 branch
EUCLIDEAN = {(2, 2, 2, 2): "{2,2,2,2}", (3, 3, 3): "{3,3,3}",
             (2, 4, 4): "{2,4,4}", (2, 3, 6): "{2,3,6}"}
# chi > 0 branch, exceptional members
SPHERICAL = {(2, 3, 3): "{2,3,3}", (2, 3, 4): "{2,3,4}", (2, 3, 5): "{2,3,5}"}


class ClassifierInconsistency(AssertionError):
    pass


@dataclass(frozen=True)
class Orbifold:
    """Marked points (critical-value classes) with their ramification value nu >= 2."""

    marked: tuple  # of (AlgebraicPointSet, nu)

    def signature(self) -> "Signature":
        vals = []
        for cls, nu in self.marked:
            vals.extend([nu] * cls.size)
        return Signature(tuple(sorted(vals)))

    def to_json(self):
        return [{"value": c.to_json(), "nu": nu} for c, nu in self.marked]


@dataclass(frozen=True)
class Signature:
    values: tuple

    def __str__(self):
        return "{" + ",".join(map(str, self.values)) + "}"

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ClassVerdict:
    chi: Fraction
    signature: Signature
    in_list: bool
    list_member: str | None
    genus_bound: str

    def to_json(self):
        return {"signature": list(self.signature.values), "chi": fraction_str(self.chi),
                "in_list": self.in_list, "list_member": self.list_member,
                "verdict": self.genus_bound}

    def summary(self) -> str:
        bound = "<= 1" if self.genus_bound == GENUS_LE_1 else ">= 2"
        return (f"signature {self.signature}; chi = {fraction_str(self.chi)}; "
                f"verdict: normalization genus {bound}")


def ramification_orbifold(P: RationalMap) -> Orbifold:
    marked = []
    for entry in critical_structure(P):
        nu = lcm(*entry.local_degrees)
        if nu > 1:
            marked.append((entry.value, nu))
    return Orbifold(tuple(marked))


def euler_characteristic(o) -> Fraction:
    """2 + sum over marked points of (1/nu - 1); accepts an Orbifold or a signature."""
    values = o.signature().values if isinstance(o, Orbifold) else tuple(o)
    return 2 + sum((Fraction(1, nu) - 1 for nu in values), Fraction(0))


def list_member(sig) -> str | None:
    """Tag of the matching entry of the genus <= 1 signature lists, or None."""
    v = tuple(sorted(sig))
    if v in EUCLIDEAN:
        return EUCLIDEAN[v]
    if v in SPHERICAL:
        return SPHERICAL[v]
    if len(v) == 2 and v[0] == v[1] >= 2:
        return "{l,l}"
    if len(v) == 3 and v[0] == v[1] == 2 and v[2] >= 2:
        return "{2,2,l}"
    return None


def classify(P: RationalMap) -> ClassVerdict:
    """Signature, Euler characteristic and the normalization-genus verdict of P.

    List membership and the sign of chi are computed independently and must
    agree.
    """
    if P.degree < 2:
        raise ValueError("classify needs deg P >= 2")
    sig = ramification_orbifold(P).signature()
    return verdict_from_signature(sig)


def verdict_from_signature(sig: Signature) -> ClassVerdict:
    chi = euler_characteristic(sig.values)
    tag = list_member(sig.values)
    in_list = tag is not None
    if in_list != (chi >= 0):
        raise ClassifierInconsistency(f"signature {sig}: chi = {chi} but list tag {tag}")
    return ClassVerdict(chi, sig, in_list, tag, GENUS_LE_1 if chi >= 0 else GENUS_GE_2)
