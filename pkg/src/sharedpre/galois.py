"""Galois coverings of the sphere: recognition, deck groups, quotient maps."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .maps import (INF, Moebius, RationalMap, compose, critical_structure,
                   map_from_expr, point_sort_key, roots_in_field)
from .poly import Poly
from .scalar import FieldError, FieldSpec, QQ, QQI, cyclotomic_field, root_of_unity

DEFAULT_GROUP_CAP = 10080


class DeckReconstructionError(FieldError):
    """Deck transformations could not be expressed over the declared field."""

    def __init__(self, msg, hint=None):
        super().__init__(msg)
        self.hint = hint


class NotGalois(ValueError):
    pass


class GroupShapeError(ValueError):
    pass


def moebius_key(m: Moebius):
    return m.key()


def closure(generators, cap: int = DEFAULT_GROUP_CAP):
    """All elements of the group generated by ``generators`` (BFS), or None past cap."""
    if not generators:
        raise ValueError("empty generator list")
    K = generators[0].field
    ident = Moebius.identity(K)
    gens = list(generators) + [g.inverse() for g in generators]
    seen = {ident.key(): ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g @ x
            k = y.key()
            if k not in seen:
                seen[k] = y
                if len(seen) > cap:
                    return None
                queue.append(y)
    return sort_elements(seen.values())


def sort_elements(elements):
    els = list(elements)
    els.sort(key=lambda m: (not m.is_identity(), m.key()))
    return els


@dataclass
class TransformGroup:
    generators: list
    elements: list | None = None
    order: int | None = None  # None means infinite or unknown

    def __post_init__(self):
        if self.elements is not None:
            self.elements = sort_elements(self.elements)
            self.order = len(self.elements)
            self._keys = {m.key() for m in self.elements}
        else:
            self._keys = None

    @classmethod
    def generated_by(cls, generators, cap: int = DEFAULT_GROUP_CAP):
        els = closure(generators, cap)
        return cls(list(generators), els)

    def __contains__(self, m: Moebius) -> bool:
        if self._keys is None:
            raise ValueError("group elements are not enumerated")
        return m.key() in self._keys

    def same_elements(self, other: "TransformGroup") -> bool:
        return self._keys is not None and self._keys == other._keys

    def to_json(self):
        d = {"generators": [g.to_json() for g in self.generators],
             "order": self.order if self.order is not None else "infinite/unknown"}
        if self.elements is not None:
            d["elements"] = [str(g) for g in self.elements]
        return d


@dataclass
class GaloisCertificate:
    is_galois: bool
    group: TransformGroup | None = None
    witness_fiber: object = None  # PortraitEntry with non-uniform degrees
    note: str = ""

    def to_json(self):
        d = {"is_galois": self.is_galois, "note": self.note}
        if self.group is not None:
            d["deck_group"] = self.group.to_json()
        if self.witness_fiber is not None:
            d["witness"] = self.witness_fiber.to_json()
        return d


def _homogenized(p: Poly, m: Moebius, deg: int) -> Poly:
    """deg-homogenized p((a z + b)/(c z + d)) * (c z + d)^deg."""
    K = m.field
    lin_n = Poly(K, [m.b, m.a])
    lin_d = Poly(K, [m.d, m.c])
    acc = Poly(K, [])
    npow = Poly(K, [1])
    dpows = [Poly(K, [1])]
    for _ in range(deg):
        dpows.append(dpows[-1] * lin_d)
    for k in range(deg + 1):
        c = p.coeff(k)
        if not c.is_zero():
            acc = acc + npow * dpows[deg - k] * K(c)
        npow = npow * lin_n
    return acc


def is_deck_transformation(P: RationalMap, m: Moebius) -> bool:
    """Exact test of num_P(m) den_P - den_P(m) num_P == 0 with cleared denominators."""
    d = P.degree
    K = m.field if m.field is not QQ else P.field
    N, D = P.num.with_field(K), P.den.with_field(K)
    m = Moebius(m.a, m.b, m.c, m.d, K)
    lhs = _homogenized(N, m, d) * D - _homogenized(D, m, d) * N
    return lhs.is_zero()


def _jet_moebius(P: RationalMap, dP, d2P, z0, w):
    """The Moebius sigma with sigma(z0) = w and P o sigma = P to second order at z0."""
    p1w = dP(w)
    s = dP(z0) / p1w
    s2 = (d2P(z0) - d2P(w) * s * s) / p1w
    k = s2 / (2 * s)
    one = z0.field.one()
    return Moebius(s - w * k, w * (one + k * z0) - s * z0, -k, one + k * z0, z0.field)


def _base_points(K):
    vals = [Fraction(n, d) for d in (1, 2, 3, 5, 7) for n in range(2, 12)]
    vals += [-v for v in vals]
    seen = set()
    for v in vals:
        if v not in seen:
            seen.add(v)
            yield K(v)


def _uniform_fibers(P: RationalMap):
    portrait = critical_structure(P)
    for e in portrait:
        if len(set(e.local_degrees)) != 1:
            return False, e
    return True, None


def deck_group(P: RationalMap, field: FieldSpec | None = None) -> TransformGroup:
    """All Moebius sigma over the declared field with P o sigma = P.

    A regular base point z0 is chosen; for every exact point w of the fiber
    through z0 the unique candidate sigma is determined from the 2-jet of
    P o sigma = P at z0, and then verified exactly.
    """
    K = field or P.field
    if K is not P.field:
        P = RationalMap(P.num.with_field(K), P.den.with_field(K), K)
    d = P.degree
    if d < 1:
        raise ValueError("constant map")
    if P.is_rational() and d >= 2:
        uniform, witness = _uniform_fibers(P)
        if not uniform:
            raise NotGalois(f"fiber over {witness.value} has local degrees {witness.local_degrees}")
    dP = P.derivative()
    d2P = dP.derivative()
    for z0 in _base_points(K):
        c = P(z0)
        if c is INF or dP(z0) is INF or dP(z0).is_zero():
            continue
        f = P.num - P.den * c
        if f.degree != d or f.gcd(f.deriv()).degree > 0:
            continue
        roots = roots_in_field(f)
        if len(roots) < d:
            raise DeckReconstructionError(
                f"fiber of {P} over {c} is not split over {K}", hint=_split_hint(f))
        elements = []
        for w in roots:
            sigma = _jet_moebius(P, dP, d2P, z0, w)
            if not is_deck_transformation(P, sigma):
                raise ArithmeticError(f"candidate {sigma} failed exact verification")
            elements.append(sigma)
        group = TransformGroup(_minimal_generators(elements), elements)
        if group.order != d:
            raise ArithmeticError("deck group order differs from degree")
        return group
    raise DeckReconstructionError("no admissible base point found")


def _split_hint(f: Poly):
    """Minimal polynomial over Q of an unrecognized fiber point, when f is rational."""
    if not f.is_rational():
        return None
    import sympy

    z = sympy.Symbol("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * z**k
               for k, c in enumerate(f.rational_coeffs()))
    _, factors = sympy.factor_list(expr, z, domain="QQ")
    nonlinear = sorted((g for g, _ in factors if sympy.degree(g, z) > 1),
                       key=lambda g: sympy.degree(g, z))
    return str(nonlinear[0]) if nonlinear else None


def _minimal_generators(elements):
    """Greedy generating set drawn from ``elements`` in canonical order."""
    els = sort_elements(elements)
    gens = []
    span = {els[0].key()} if els else set()
    for g in els:
        if g.key() in span:
            continue
        gens.append(g)
        span = {m.key() for m in closure(gens)}
        if len(span) == len(els):
            break
    return gens


def is_galois(P: RationalMap, field: FieldSpec | None = None) -> GaloisCertificate:
    """Uniform-fiber test, cross-checked by the deck group when it is expressible."""
    if P.degree < 2:
        raise ValueError("is_galois needs deg P >= 2")
    if P.is_rational():
        uniform, witness = _uniform_fibers(P)
        if not uniform:
            return GaloisCertificate(False, witness_fiber=witness,
                                     note="non-uniform local degrees")
    try:
        group = deck_group(P, field)
    except DeckReconstructionError as exc:
        if P.is_rational():
            hint = f" (needs a root of {exc.hint})" if exc.hint else ""
            return GaloisCertificate(True, None, note="uniform fibers; deck group not "
                                     f"expressible over the declared field{hint}")
        raise
    except NotGalois:
        return GaloisCertificate(False, note="deck group smaller than degree")
    if group.order != P.degree:
        raise ArithmeticError("Galois cross-check failed")
    return GaloisCertificate(True, group, note="uniform fibers; deck group verified")


# --- standard Galois families -------------------------------------------------------

TETRAHEDRAL_MAP = "(z^4+1)*(z^8-34*z^4+1)/(z^2*(z^4-1)^2)"
OCTAHEDRAL_MAP = "(z^8+14*z^4+1)^3/(108*z^4*(z^4-1)^4)"
ICOSAHEDRAL_MAP = ("(-(z^20+1)+228*(z^15-z^5)-494*z^10)^3"
                   "/(1728*z^5*(z^10+11*z^5-1)^5)")


def _platonic_generators(kind):
    if kind in ("tetrahedral", "octahedral"):
        K = QQI
        i = K.gen()
        order3 = Moebius(1, i, 1, -i, K)
        if kind == "tetrahedral":
            return K, [Moebius(-1, 0, 0, 1, K), Moebius(0, 1, 1, 0, K), order3]
        return K, [Moebius(i, 0, 0, 1, K), Moebius(0, 1, 1, 0, K), order3]
    K = cyclotomic_field(5)
    e = K.gen()
    e2, e3, e4 = e**2, e**3, e**4
    rot = Moebius(e, 0, 0, 1, K)
    flip = Moebius(0, -1, 1, 0, K)
    t = Moebius(-(e - e4), e2 - e3, e2 - e3, e - e4, K)
    return K, [rot, flip, t]


def standard_family(kind: str, n: int | None = None):
    """(quotient map, deck group, field) for a classical finite Moebius group."""
    if kind in ("power", "cyclic"):
        if n is None or n < 2:
            raise ValueError("power family needs n >= 2")
        K = cyclotomic_field(n)
        P = map_from_expr(f"z^{n}", K)
        gens = [Moebius(root_of_unity(n, K), 0, 0, 1, K)]
    elif kind == "dihedral":
        if n is None or n < 2:
            raise ValueError("dihedral family needs n >= 2")
        K = cyclotomic_field(n)
        P = map_from_expr(f"(z^{n}+z^(-{n}))/2", K)
        gens = [Moebius(root_of_unity(n, K), 0, 0, 1, K), Moebius(0, 1, 1, 0, K)]
    elif kind in ("tetrahedral", "octahedral", "icosahedral"):
        K, gens = _platonic_generators(kind)
        expr = {"tetrahedral": TETRAHEDRAL_MAP, "octahedral": OCTAHEDRAL_MAP,
                "icosahedral": ICOSAHEDRAL_MAP}[kind]
        P = map_from_expr(expr, K)
    else:
        raise ValueError(f"unknown family {kind!r}")
    for g in gens:
        if not is_deck_transformation(P, g):
            raise ArithmeticError(f"{g} is not a deck transformation of the {kind} map")
    group = TransformGroup.generated_by(gens)
    if group.order != P.degree:
        raise ArithmeticError(f"{kind}: group order {group.order} != degree {P.degree}")
    return P, group, K


_PLATONIC_CACHE = {}


def _platonic(kind):
    if kind not in _PLATONIC_CACHE:
        _PLATONIC_CACHE[kind] = standard_family(kind)
    return _PLATONIC_CACHE[kind]


# --- quotient maps of finite groups ------------------------------------------------

def _conjugator(g: Moebius):
    """tau sending the two fixed points of g to 0 and inf."""
    fps = g.fixed_points()
    if fps is None or len(fps) != 2:
        return None
    p, q = fps
    K = g.field
    if q is INF:
        return Moebius(1, -p, 0, 1, K)
    if p is INF:
        return Moebius(0, 1, 1, -q, K)
    return Moebius(1, -p, 1, -q, K)


def quotient_map(G: TransformGroup) -> RationalMap:
    """A Galois covering whose deck group is exactly G (cyclic, dihedral, shipped platonic)."""
    if G.elements is None:
        raise ValueError("quotient_map needs an enumerated finite group")
    n = G.order
    K = G.elements[0].field
    if n == 1:
        return RationalMap(Poly(K, [0, 1]), None, K)
    orders = {g.key(): g.order(n) for g in G.elements}
    A = None
    cyclic_gen = next((g for g in sorted(G.elements, key=lambda g: (
        not (g.b.is_zero() and g.c.is_zero()), g.key())) if orders[g.key()] == n), None)
    if cyclic_gen is not None:
        tau = _conjugator(cyclic_gen)
        if tau is None:
            raise GroupShapeError("fixed points of the generator are not in the field")
        A = compose(map_from_expr(f"z^{n}", K), tau.to_map())
    elif n % 2 == 0:
        m = n // 2
        # rotations fixing 0 and inf first, so the standard dihedral map comes out
        rotations = sorted((r for r in G.elements if orders[r.key()] == m),
                           key=lambda r: (not (r.b.is_zero() and r.c.is_zero()), r.key()))
        for r in rotations:
            rot = TransformGroup.generated_by([r])
            tau = _conjugator(r)
            if tau is None:
                continue
            h = next(x for x in G.elements if x not in rot)
            hc = tau @ h @ tau.inverse()
            # hc(z) = c/z
            if not (hc.a.is_zero() and hc.d.is_zero()):
                continue
            c = hc.b / hc.c
            half = K(Fraction(1, 2))
            outer = RationalMap(Poly(K, [c**m * half] + [0] * (2 * m - 1) + [half]),
                                Poly.monomial(K, m), K)
            A = compose(outer, tau.to_map())
            break
    if A is None:
        for kind in ("tetrahedral", "octahedral", "icosahedral"):
            P, H, HK = _platonic(kind)
            if H.order == n and HK == K and H.same_elements(G):
                A = P
                break
    if A is None:
        raise GroupShapeError(f"unsupported group of order {n}")
    if A.degree != n or not all(is_deck_transformation(A, g) for g in G.generators):
        raise ArithmeticError("quotient map verification failed")
    return A


def equal_up_to_left_moebius(A: RationalMap, B: RationalMap) -> bool:
    from .maps import NotAFactor, left_factor

    if A.degree != B.degree:
        return False
    try:
        return left_factor(A, B).degree == 1
    except NotAFactor:
        return False
