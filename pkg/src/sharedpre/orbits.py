"""Truncated orbits of Moebius groups and sets with a common preimage.

For Galois maps P_1, ..., P_k whose deck groups lie in a group Gamma, the
orbit S of a point under Gamma satisfies S = P_i^{-1}(P_i(S)) for every i, so
the value sets K_i = P_i(S) have equal preimages.  Everything here works on
breadth-first truncations of S and checks the equalities on an inner window.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field

from .galois import (GroupShapeError, TransformGroup, closure, deck_group,
                     quotient_map, sort_elements)
from .maps import (INF, Moebius, NotAFactor, RationalMap, compose, fiber, is_inf, left_factor,
                   moebius_from_expr, point_sort_key, point_str, point_to_json)
from .scalar import QQ, ExactScalar, FieldSpec

DEFAULT_POINT_CAP = 10 ** 6
DEFAULT_GROUP_CAP = 10080
DEFAULT_MU = "z + 1"


class OrbitCapExceeded(RuntimeError):
    pass


class DeckContainmentError(ValueError):
    def __init__(self, msg, element=None):
        super().__init__(msg)
        self.element = element


class WindowTooDeep(ValueError):
    pass


class Undetermined(RuntimeError):
    pass


def _with_inverses(generators):
    gens = []
    keys = set()
    for g in list(generators) + [g.inverse() for g in generators]:
        if g.key() not in keys:
            keys.add(g.key())
            gens.append(g)
    return gens


@dataclass
class OrbitSet:
    base: object
    generators: list
    depth: int
    word_length: dict  # point -> minimal word length

    @property
    def points(self):
        return sorted(self.word_length, key=lambda p: (self.word_length[p], point_sort_key(p)))

    def within(self, radius: int):
        return [p for p in self.points if self.word_length[p] <= radius]

    def __contains__(self, p):
        return p in self.word_length

    def __len__(self):
        return len(self.word_length)

    def to_json(self):
        return {"base": point_to_json(self.base),
                "generators": [g.to_json() for g in self.generators],
                "depth": self.depth,
                "points": [{"point": point_to_json(p), "word_length": self.word_length[p]}
                           for p in self.points]}


def orbit(base, generators, depth: int, cap: int = DEFAULT_POINT_CAP) -> OrbitSet:
    """Breadth-first orbit of ``base`` with minimal word lengths up to ``depth``."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    gens = _with_inverses(generators)
    wl = {base: 0}
    level = [base]
    for n in range(1, depth + 1):
        new = set()
        for p in level:
            for g in gens:
                q = g(p)
                if q not in wl and q not in new:
                    new.add(q)
        level = sorted(new, key=point_sort_key)
        for q in level:
            wl[q] = n
        if len(wl) > cap:
            raise OrbitCapExceeded(f"orbit has more than {cap} points")
        if not level:
            break
    return OrbitSet(base, list(generators), depth, wl)


def rationals_by_height():
    """0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 3/2, -3/2, 1/3, ... by max(|p|, q), then q, then p."""
    from fractions import Fraction
    from math import gcd

    yield Fraction(0)
    h = 1
    while True:
        for q in range(1, h + 1):
            for p in range(1, h + 1):
                if max(p, q) == h and gcd(p, q) == 1:
                    yield Fraction(p, q)
                    yield Fraction(-p, q)
        h += 1


def is_admissible_base(x, maps, generators) -> bool:
    """x is a finite point, unramified and not a pole for every map, and not fixed
    by any generator."""
    if is_inf(x):
        return False
    for P in maps:
        if P.den(x).is_zero():
            return False
        wronskian = P.num.deriv() * P.den - P.num * P.den.deriv()
        if wronskian(x).is_zero():
            return False
    return all(g(x) != x for g in generators)


def choose_base(maps, generators, limit: int = 10000):
    """Smallest admissible rational in height order."""
    K = maps[0].field
    for n, q in enumerate(rationals_by_height()):
        if n >= limit:
            break
        x = K(q)
        if is_admissible_base(x, maps, generators):
            return x
    raise ValueError(f"no admissible base point among the first {limit} rationals")


@dataclass
class ValueSet:
    values: dict  # value -> minimal word length of a point of S mapping to it
    provenance: int

    def __contains__(self, v):
        return v in self.values

    def within(self, radius: int):
        return sorted((v for v, n in self.values.items() if n <= radius), key=point_sort_key)

    def to_json(self):
        return {"provenance": self.provenance,
                "values": [point_to_json(v) for v in
                           sorted(self.values, key=lambda v: (self.values[v], point_sort_key(v)))]}


def word_lengths_in_group(targets, generators, max_elements: int = 200000,
                          max_length: int | None = None):
    """Word length of each target Moebius in <generators>, None when not found
    within max_elements elements or max_length letters."""
    gens = _with_inverses(generators)
    K = targets[0].field if targets else QQ
    ident = Moebius.identity(K)
    want = {t.key(): None for t in targets}
    if ident.key() in want:
        want[ident.key()] = 0
    seen = {ident.key()}
    level = [ident]
    n = 0
    while level and any(v is None for v in want.values()) and len(seen) < max_elements:
        if max_length is not None and n >= max_length:
            break
        n += 1
        nxt = []
        for x in level:
            for g in gens:
                y = g @ x
                k = y.key()
                if k not in seen:
                    seen.add(k)
                    nxt.append(y)
                    if k in want and want[k] is None:
                        want[k] = n
        level = nxt
    return [want[t.key()] for t in targets]


def deck_growth_bound(maps, generators, field: FieldSpec | None = None,
                      max_length: int | None = None):
    """(bound, missing): max word length of deck elements, and elements not found
    in the group (within max_length letters when given)."""
    bound = 0
    missing = []
    for P in maps:
        G = deck_group(P, field)
        lengths = word_lengths_in_group(G.elements, generators, max_length=max_length)
        for g, n in zip(G.elements, lengths):
            if n is None:
                missing.append(g)
            else:
                bound = max(bound, n)
    return bound, missing


def construct_sets(maps, S: OrbitSet, field: FieldSpec | None = None):
    """K_i = P_i(S), after checking every deck group lies in the orbit's group."""
    _, missing = deck_growth_bound(maps, S.generators, field, S.depth)
    if missing:
        raise DeckContainmentError(f"deck element {missing[0]} is not a word of length "
                                   f"<= {S.depth} in the generators",
                                   missing[0])
    out = []
    for i, P in enumerate(maps):
        vals = {}
        for p in S.points:
            v = P(p)
            if v not in vals:
                vals[v] = S.word_length[p]
        out.append(ValueSet(vals, i))
    return out


def generators_for(maps, mu: str | Moebius | None = DEFAULT_MU, field: FieldSpec | None = None):
    """Non-identity deck elements of all maps followed by mu, duplicates removed."""
    gens = []
    keys = set()
    for P in maps:
        for g in deck_group(P, field).elements:
            if not g.is_identity() and g.key() not in keys:
                keys.add(g.key())
                gens.append(g)
    if mu is not None:
        m = moebius_from_expr(mu, field or maps[0].field) if isinstance(mu, str) else mu
        if m.key() not in keys:
            gens.append(m)
    return gens


@dataclass
class Check:
    name: str
    passed: bool
    counterexamples: list = dc_field(default_factory=list)
    checked: int = 0

    def to_json(self):
        return {"check": self.name, "pass": self.passed, "checked": self.checked,
                "counterexamples": self.counterexamples[:20]}


@dataclass
class VerificationReport:
    window_depth: int
    depth: int
    growth_bound: int
    checks: list
    window_points: list
    preimages_in_window: list  # per map: window points s with P_i(s) in K_i
    notes: list = dc_field(default_factory=list)
    require_single_k: bool = False

    @property
    def passed(self) -> bool:
        names = {"fiber-completeness", "equality-of-preimages"}
        if self.require_single_k:
            names.add("single-K-equality")
        return all(c.passed for c in self.checks if c.name in names)

    def check(self, name):
        return next(c for c in self.checks if c.name == name)

    def to_json(self):
        return {"pass": self.passed, "window_depth": self.window_depth, "depth": self.depth,
                "growth_bound": self.growth_bound,
                "checks": [c.to_json() for c in self.checks],
                "window_preimages": [[point_str(p) for p in pre]
                                     for pre in self.preimages_in_window],
                "notes": self.notes}


def _fiber_points(P, c, hints):
    pts = []
    bad = []
    for fp in fiber(P, c, hints=hints):
        if fp.exact:
            pts.append(fp.point)
        else:
            bad.append(fp.point)
    return pts, bad


def verify_shared_preimage(maps, sets, S: OrbitSet, window_depth: int,
                           field: FieldSpec | None = None,
                           require_single_k: bool = False) -> VerificationReport:
    """Windowed check of P_1^{-1}(K_1) = ... = P_k^{-1}(K_k) = S.

    (a) fiber completeness: for s within the window, every point of
        P_i^{-1}(P_i(s)) is an exact point of S;
    (b) equality of preimages: for every value k of K_i in the window image
        (or not produced by S at all), every x in P_i^{-1}(k) lies in S and
        satisfies P_j(x) in K_j for all j;
    (c) single-K equality (informational unless required): the window images
        V_i are contained in every K_j.
    """
    growth, missing = deck_growth_bound(maps, S.generators, field, S.depth)
    notes = sorted({f"deck element {g} is not a word of length <= {S.depth} "
                    "in the generators" for g in missing})
    if window_depth < 0 or window_depth + growth > S.depth:
        raise WindowTooDeep(f"window {window_depth} + growth {growth} exceeds depth {S.depth}")
    window = S.within(window_depth)
    decks = [deck_group(P, field).elements if not missing else [] for P in maps]

    completeness = Check("fiber-completeness", True)
    for s in window:
        for i, P in enumerate(maps):
            hints = [g(s) for g in decks[i]]
            pts, bad = _fiber_points(P, P(s), hints)
            completeness.checked += 1
            for b in bad:
                completeness.passed = False
                completeness.counterexamples.append(
                    f"map {i + 1}: fiber of {point_str(P(s))} has a point outside the field near {b}")
            for x in pts:
                if x not in S:
                    completeness.passed = False
                    completeness.counterexamples.append(
                        f"map {i + 1}: {point_str(x)} in fiber over {point_str(P(s))} is not in S")

    images = [{P(s) for s in window} for P in maps]
    produced = [{P(s) for s in S.points} for P in maps]
    equality = Check("equality-of-preimages", True)
    for i, (P, K) in enumerate(zip(maps, sets)):
        for k in sorted(K.values, key=point_sort_key):
            if k in produced[i] and k not in images[i]:
                continue
            hints = [g(s) for s in window for g in decks[i] if P(s) == k]
            pts, bad = _fiber_points(P, k, hints)
            equality.checked += 1
            for b in bad:
                equality.passed = False
                equality.counterexamples.append(
                    f"map {i + 1}: fiber of {point_str(k)} has a point outside the field near {b}")
            for x in pts:
                for j, (Q, Kj) in enumerate(zip(maps, sets)):
                    if Q(x) not in Kj:
                        equality.passed = False
                        equality.counterexamples.append(
                            f"{point_str(x)} is in P{i + 1}^-1(K{i + 1}) but not in "
                            f"P{j + 1}^-1(K{j + 1})")
                if x not in S:
                    equality.passed = False
                    equality.counterexamples.append(
                        f"{point_str(x)} is in P{i + 1}^-1(K{i + 1}) but not in S")

    single = Check("single-K-equality", True)
    for i in range(len(maps)):
        for j, Kj in enumerate(sets):
            for v in sorted(images[i], key=point_sort_key):
                single.checked += 1
                if v not in Kj:
                    single.passed = False
                    single.counterexamples.append(
                        f"{point_str(v)} in the window image of P{i + 1} but not in K{j + 1}")

    preimages = [[s for s in window if P(s) in K] for P, K in zip(maps, sets)]
    return VerificationReport(window_depth, S.depth, growth,
                              [completeness, equality, single], window, preimages,
                              notes, require_single_k)


# --- finite-group reduction --------------------------------------------------------

def _max_finite_order(field_degree: int) -> int:
    """Largest n with phi(n) <= 2 [K:Q]; a finite-order Moebius map over K has order <= it."""
    from sympy import totient

    bound = 2 * field_degree
    return max(n for n in range(1, 2 * bound * bound + 7) if totient(n) <= bound)


@dataclass
class GrowthCertificate:
    element: Moebius  # of infinite order
    ball_sizes: list  # word-ball sizes for consecutive radii, strictly increasing

    def to_json(self):
        return {"infinite_order_element": str(self.element), "ball_sizes": self.ball_sizes}


def _ball_sizes(generators, radii: int):
    gens = _with_inverses(generators)
    K = generators[0].field
    ident = Moebius.identity(K)
    seen = {ident.key()}
    level = [ident]
    sizes = [1]
    for _ in range(radii):
        nxt = []
        for x in level:
            for g in gens:
                y = g @ x
                if y.key() not in seen:
                    seen.add(y.key())
                    nxt.append(y)
        level = nxt
        sizes.append(len(seen))
    return sizes


def growth_certificate(generators, radii: int = 8):
    """Certificate that <generators> is infinite, or None when none is found."""
    K = generators[0].field
    nmax = _max_finite_order(K.degree)
    gens = _with_inverses(generators)
    candidates = list(gens) + [g @ h for g in gens for h in gens]
    for g in sort_elements(candidates):
        if g.is_identity():
            continue
        p = g
        finite = False
        for _ in range(nmax):
            if p.is_identity():
                finite = True
                break
            p = p @ g
        if finite:
            continue
        sizes = _ball_sizes(generators, radii)
        if all(b > a for a, b in zip(sizes, sizes[1:])):
            return GrowthCertificate(g, sizes)
    return None


@dataclass
class FiniteReduction:
    group: TransformGroup
    A: RationalMap
    factors: list

    def to_json(self):
        return {"group": self.group.to_json(), "A": str(self.A),
                "factors": [str(F) for F in self.factors]}


@dataclass
class ReductionOutcome:
    status: str  # "finite", "infinite" or "undetermined"
    reduction: FiniteReduction | None = None
    certificate: GrowthCertificate | None = None
    note: str = ""

    def to_json(self):
        d = {"status": self.status, "note": self.note}
        if self.reduction is not None:
            d.update(self.reduction.to_json())
        if self.certificate is not None:
            d["certificate"] = self.certificate.to_json()
        return d


def reduce_finite(maps, field: FieldSpec | None = None,
                  cap: int = DEFAULT_GROUP_CAP) -> ReductionOutcome:
    """Full outcome of the finite-group reduction, with certificates."""
    gens = []
    for P in maps:
        G = deck_group(P, field)
        for g in G.elements:
            if not g.is_identity() and all(g.key() != h.key() for h in gens):
                gens.append(g)
    if not gens:
        gens = [Moebius.identity(field or maps[0].field)]
    els = closure(gens, cap)
    if els is None:
        cert = growth_certificate(gens)
        if cert is None:
            return ReductionOutcome("undetermined", note=f"closure exceeds {cap} elements "
                                    "and no growth certificate was found")
        return ReductionOutcome("infinite", certificate=cert)
    G = TransformGroup(gens, els)
    try:
        A = quotient_map(G)
    except GroupShapeError as exc:
        return ReductionOutcome("undetermined", note=str(exc))
    factors = []
    for P in maps:
        try:
            F = left_factor(A, P)
        except NotAFactor:
            raise ArithmeticError(f"{P} is not a right factor of the quotient map")
        if compose(F, P) != A:
            raise ArithmeticError("A = F o P failed exact verification")
        factors.append(F)
    return ReductionOutcome("finite", FiniteReduction(G, A, factors))


def finite_group_reduction(maps, field: FieldSpec | None = None,
                           cap: int = DEFAULT_GROUP_CAP):
    """(A, [F_i]) with A = F_i o P_i when the deck groups generate a finite group,
    None when that group is certified infinite."""
    out = reduce_finite(maps, field, cap)
    if out.status == "undetermined":
        raise Undetermined(out.note)
    if out.status == "infinite":
        return None
    return out.reduction.A, out.reduction.factors
