"""Rational maps, Moebius transformations, ramification data and fibers.

Points of the sphere are :class:`ExactScalar` values or the singleton
:data:`INF`.  The point at infinity is always handled through the chart swap
``z -> 1/z``: a fiber over ``c`` is the zero set of ``num - c*den`` together
with ``z = inf`` counted ``deg P - deg(num - c*den)`` times.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import itertools

import mpmath

from .poly import Poly, clear_denominators, nullspace
from .scalar import (ComplexBall, DEFAULT_PRECISION_CAP, ExactScalar, FieldError,
                     FieldSpec, PrecisionCapExceeded, QQ, fraction_str,
                     isolate_roots, numeric_roots, poly_str, rational_reconstruct,
                     to_fraction)


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("sharedpre-infinity")

    def sort_key(self):
        return (float("inf"),)


INF = _Infinity()


def is_inf(p) -> bool:
    return p is INF


def point_str(p) -> str:
    return "inf" if p is INF else str(p)


def point_sort_key(p):
    if p is INF:
        return (1,)
    return (0,) + tuple(p.coords)


def point_to_json(p):
    if p is INF:
        return "inf"
    return p.field.element_to_json(p)


def point_from_json(x, field: FieldSpec):
    if isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    return field.element_from_json(x)


class NotAFactor(Exception):
    """Raised when a requested left factor does not exist."""


# --- Moebius transformations ------------------------------------------------

class Moebius:
    """z -> (a z + b) / (c z + d), scaled so the first nonzero entry is 1."""

    __slots__ = ("a", "b", "c", "d", "field")

    def __init__(self, a, b, c, d, field: FieldSpec | None = None):
        vals = list((a, b, c, d))
        if field is None:
            field = next((v.field for v in vals if isinstance(v, ExactScalar)
                          and not v.is_rational()), QQ)
        vals = [field(v) for v in vals]
        det = vals[0] * vals[3] - vals[1] * vals[2]
        if det.is_zero():
            raise ValueError("degenerate Moebius transformation (ad - bc = 0)")
        lead = next(v for v in vals if not v.is_zero())
        inv = lead.inverse()
        self.a, self.b, self.c, self.d = (v * inv for v in vals)
        self.field = field

    @classmethod
    def identity(cls, field=QQ):
        return cls(1, 0, 0, 1, field)

    @classmethod
    def translation(cls, s, field=QQ):
        return cls(1, s, 0, 1, field)

    def __call__(self, p):
        a, b, c, d = self.a, self.b, self.c, self.d
        if p is INF:
            return INF if c.is_zero() else a / c
        den = c * p + d
        num = a * p + b
        if den.is_zero():
            return INF
        return num / den

    def __matmul__(self, other: "Moebius") -> "Moebius":
        """self o other."""
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Moebius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h,
                       _join_fields(self.field, other.field))

    def inverse(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a, self.field)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace_invariant(self):
        """(a + d)^2 / (ad - bc), a conjugation invariant."""
        t = self.a + self.d
        return t * t / self.det()

    def is_identity(self) -> bool:
        return (self.b.is_zero() and self.c.is_zero() and self.a == self.d)

    def key(self):
        return tuple(tuple(v.coords) for v in (self.a, self.b, self.c, self.d))

    def __eq__(self, other):
        if not isinstance(other, Moebius):
            return NotImplemented
        return all(x == y for x, y in zip((self.a, self.b, self.c, self.d),
                                          (other.a, other.b, other.c, other.d)))

    def __hash__(self):
        return hash(tuple(hash(v) for v in (self.a, self.b, self.c, self.d)))

    def to_map(self) -> "RationalMap":
        K = self.field
        return RationalMap(Poly(K, [self.b, self.a]), Poly(K, [self.d, self.c]), K)

    def power(self, k: int) -> "Moebius":
        result = Moebius.identity(self.field)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result @ base
        return result

    def order(self, bound: int = 120):
        """Order if finite and at most ``bound``, else None."""
        g = self
        for k in range(1, bound + 1):
            if g.is_identity():
                return k
            g = g @ self
        return None

    def fixed_points(self):
        """Exact fixed points in the declared field (None if irrational)."""
        a, b, c, d = self.a, self.b, self.c, self.d
        if c.is_zero():
            if (a - d).is_zero():
                return [INF]
            return [b / (d - a), INF]
        # c z^2 + (d - a) z - b = 0
        roots = roots_in_field(Poly(self.field, [-b, d - a, c]))
        if len(roots) == 1 and not ((d - a) * (d - a) + 4 * b * c).is_zero():
            return None
        if not roots:
            return None
        return sorted(set(roots), key=point_sort_key)

    def to_json(self):
        K = self.field
        return {k: K.element_to_json(v) for k, v in
                zip("abcd", (self.a, self.b, self.c, self.d))}

    @classmethod
    def from_json(cls, d, field: FieldSpec):
        if isinstance(d, str):
            return moebius_from_expr(d, field)
        return cls(*(field.element_from_json(d[k]) for k in "abcd"), field=field)

    def __repr__(self):
        return f"Moebius({self})"

    def __str__(self):
        if self.c.is_zero():
            inv = self.d.inverse()
            return poly_str((self.b * inv, self.a * inv), "z")
        a, b, c, d = self.a, self.b, self.c, self.d
        if a.is_zero():
            inv = c.inverse()
            b, c, d = b * inv, c * inv, d * inv
        num = poly_str((b, a), "z")
        den = poly_str((d, c), "z")
        if not a.is_zero() and not b.is_zero():
            num = f"({num})"
        if not d.is_zero() or not (c.is_rational() and c.to_fraction() == 1):
            den = f"({den})"
        return f"{num}/{den}"


def _join_fields(K1, K2):
    if K1 is K2 or K1 == K2:
        return K1
    if K1 is QQ:
        return K2
    if K2 is QQ:
        return K1
    raise FieldError("field mismatch")


def apply_moebius(m: Moebius, p):
    return m(p)


# --- rational maps -----------------------------------------------------------

class RationalMap:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("field", "num", "den")

    def __init__(self, num, den=None, field: FieldSpec | None = None):
        if field is None:
            field = num.field if isinstance(num, Poly) else QQ
        num = num if isinstance(num, Poly) else Poly(field, num)
        den = Poly(field, [1]) if den is None else (den if isinstance(den, Poly)
                                                    else Poly(field, den))
        num, den = num.with_field(field), den.with_field(field)
        if den.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        inv = den.lc().inverse()
        self.field = field
        self.num = num * inv
        self.den = den * inv

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def is_rational(self) -> bool:
        return self.num.is_rational() and self.den.is_rational()

    def __call__(self, p):
        n, d = self.num, self.den
        deg = self.degree
        if p is INF:
            if n.degree > d.degree:
                return INF
            if n.degree < d.degree:
                return self.field.zero()
            return n.lc() / d.lc()
        dv = d(p)
        if dv.is_zero():
            return INF
        return n(p) / dv

    def derivative(self) -> "RationalMap":
        n, d = self.num, self.den
        return RationalMap(n.deriv() * d - n * d.deriv(), d * d, self.field)

    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalMap({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self):
        d = {"num": self.num.to_json(), "den": self.den.to_json()}
        if self.field is not QQ:
            d["field"] = self.field.to_json()
        return d

    @classmethod
    def from_json(cls, d, field: FieldSpec | None = None):
        if "field" in d:
            field = FieldSpec.from_json(d["field"])
        field = field or QQ
        if "expr" in d:
            return map_from_expr(d["expr"], field)
        num = [field.element_from_json(c) for c in d["num"]]
        den = [field.element_from_json(c) for c in d.get("den", ["1"])]
        return cls(Poly(field, num), Poly(field, den), field)

    def to_sympy(self, var):
        if not self.is_rational():
            raise FieldError("sympy export needs rational coefficients")
        return (_poly_to_sympy(self.num, var)) / (_poly_to_sympy(self.den, var))


def _poly_to_sympy(p: Poly, var):
    import sympy

    return sum((sympy.Rational(c.numerator, c.denominator) * var**k
                for k, c in enumerate(p.rational_coeffs())), sympy.Integer(0))


def map_from_expr(expr: str, field: FieldSpec = QQ) -> RationalMap:
    """Parse a rational expression in ``z`` with rational coefficients."""
    import sympy

    z = sympy.Symbol("z")
    e = sympy.together(sympy.sympify(expr.replace("^", "**"), locals={"z": z}))
    n, d = sympy.fraction(e)
    pn = sympy.Poly(sympy.expand(n), z, domain="QQ").all_coeffs()[::-1]
    pd = sympy.Poly(sympy.expand(d), z, domain="QQ").all_coeffs()[::-1]
    conv = lambda c: Fraction(int(c.p), int(c.q))
    return RationalMap(Poly(field, [conv(c) for c in pn]),
                       Poly(field, [conv(c) for c in pd]), field)


def moebius_from_expr(expr: str, field: FieldSpec = QQ) -> Moebius:
    m = map_from_expr(expr, field)
    if m.degree != 1:
        raise ValueError(f"{expr!r} is not a Moebius transformation")
    return Moebius(m.num.coeff(1), m.num.coeff(0), m.den.coeff(1), m.den.coeff(0), field)


def _homogeneous_compose(outer_coeffs, n: Poly, d: Poly, m: int) -> Poly:
    """sum_k c_k n^k d^(m-k)."""
    K = n.field
    npow = [Poly(K, [1])]
    dpow = [Poly(K, [1])]
    for _ in range(m):
        npow.append(npow[-1] * n)
        dpow.append(dpow[-1] * d)
    acc = Poly(K, [])
    for k, c in enumerate(outer_coeffs):
        if not c.is_zero():
            acc = acc + (npow[k] * dpow[m - k]) * c
    return acc


def compose(f: RationalMap, g: RationalMap) -> RationalMap:
    """f o g."""
    K = _join_fields(f.field, g.field)
    m = f.degree
    gn, gd = g.num.with_field(K), g.den.with_field(K)
    num = _homogeneous_compose([K(c) for c in f.num.coeffs], gn, gd, m)
    den = _homogeneous_compose([K(c) for c in f.den.coeffs], gn, gd, m)
    return RationalMap(num, den, K)


def compose_moebius(P: RationalMap, m: Moebius) -> RationalMap:
    return compose(P, m.to_map())


# --- exact roots in the declared field ---------------------------------------

def _embedding_structure(K: FieldSpec, prec: int):
    """Conjugate generator values and, for each, the index of its complex conjugate."""
    roots = K.conjugate_roots(prec)
    conj_index = []
    with mpmath.workprec(prec):
        tol = mpmath.ldexp(1, -prec // 2)
        for r in roots:
            cr = mpmath.conj(r)
            j = min(range(len(roots)), key=lambda i: abs(roots[i] - cr))
            conj_index.append(j)
    return roots, conj_index


def _rational_roots(p: Poly):
    import sympy

    z = sympy.Symbol("z")
    expr = _poly_to_sympy(p, z)
    _, factors = sympy.factor_list(expr, z, domain="QQ")
    out = []
    for fac, _mult in factors:
        fp = sympy.Poly(fac, z)
        if fp.degree() == 1:
            a1, a0 = fp.all_coeffs()
            r = -sympy.Rational(a0) / sympy.Rational(a1)
            out.append(p.field(Fraction(int(r.p), int(r.q))))
    return out


def roots_in_field(p: Poly, prec: int = 160, max_combos: int = 20000):
    """Distinct roots of ``p`` lying in its coefficient field, found exactly.

    Over Q this is complete (rational factorization).  Over an extension each
    numerical root is matched with conjugate roots at the other embeddings,
    the power-basis coordinates are solved for and rationally reconstructed,
    and every candidate is verified exactly.
    """
    K = p.field
    if p.degree < 1:
        return []
    if K is QQ or (p.is_rational() and K.degree == 1):
        return _rational_roots(p)
    g = p.squarefree_part()
    found = {}
    # linear factors over Q first: cheap and complete for rational roots
    if g.is_rational():
        for r in _rational_roots(Poly(QQ, g.rational_coeffs())):
            found[K(r.coords[0])] = None
    n = K.degree
    roots, conj_index = _embedding_structure(K, prec)
    with mpmath.workprec(prec + 20):
        per_embedding = [numeric_roots(g.numeric_coeffs(r, prec), prec) for r in roots]
        free = []
        covered = {0, conj_index[0]}
        for l in range(1, n):
            if l not in covered:
                free.append(l)
                covered.update({l, conj_index[l]})
        V = mpmath.matrix([[r**k for k in range(n)] for r in roots])
        choices = [per_embedding[l] for l in free]
        total = 1
        for c in choices:
            total *= max(len(c), 1)
        if total * len(per_embedding[0]) > max_combos:
            choices = choices  # still bounded below by the outer loop cap
        count = 0
        for beta in per_embedding[0]:
            for combo in itertools.product(*choices):
                count += 1
                if count > max_combos:
                    break
                vals = [None] * n
                vals[0] = beta
                vals[conj_index[0]] = mpmath.conj(beta) if conj_index[0] != 0 else beta
                for l, v in zip(free, combo):
                    vals[l] = v
                    vals[conj_index[l]] = mpmath.conj(v) if conj_index[l] != l else v
                try:
                    sol = mpmath.lu_solve(V, mpmath.matrix(vals))
                except ZeroDivisionError:
                    continue
                coords = []
                ok = True
                for k in range(n):
                    x = sol[k]
                    if abs(x.imag) > mpmath.ldexp(1, -prec // 3) * max(1, abs(x)):
                        ok = False
                        break
                    q = rational_reconstruct(x.real, prec)
                    if q is None:
                        ok = False
                        break
                    coords.append(q)
                if not ok:
                    continue
                alpha = K(coords)
                if alpha not in found and g(alpha).is_zero():
                    found[alpha] = None
                    break
    return sorted(found, key=point_sort_key)


# --- critical values and ramification -----------------------------------------

@dataclass(frozen=True)
class AlgebraicPointSet:
    """A critical value: a literal sphere point or a Q-irreducible class."""

    point: object = None
    min_poly: tuple = None  # monic Fractions, low-to-high, degree >= 2

    @property
    def size(self) -> int:
        return 1 if self.min_poly is None else len(self.min_poly) - 1

    def is_literal(self) -> bool:
        return self.min_poly is None

    def numeric_values(self, prec=53):
        if self.min_poly is None:
            if self.point is INF:
                return [INF]
            return [self.point.complex(prec)]
        return numeric_roots(list(self.min_poly), prec)

    def sort_key(self):
        if self.min_poly is None:
            return (0, point_sort_key(self.point))
        return (1, len(self.min_poly), tuple(self.min_poly))

    def to_json(self):
        if self.min_poly is None:
            return point_to_json(self.point)
        return {"min_poly": [fraction_str(c) for c in self.min_poly]}

    def __str__(self):
        if self.min_poly is None:
            return point_str(self.point)
        return f"roots of {poly_str(self.min_poly, 'c')}"


@dataclass(frozen=True)
class PortraitEntry:
    value: AlgebraicPointSet
    local_degrees: tuple  # sorted descending

    def to_json(self):
        return {"value": self.value.to_json(), "local_degrees": list(self.local_degrees)}


@dataclass(frozen=True)
class RamificationPortrait:
    degree: int
    entries: tuple

    def riemann_hurwitz_total(self) -> int:
        return sum(e.value.size * sum(k - 1 for k in e.local_degrees) for e in self.entries)

    def to_json(self):
        return [e.to_json() for e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _local_degrees_over(P: RationalMap, c, L: FieldSpec):
    """Multiset of local degrees of P over the point c of field L (or INF)."""
    d = P.degree
    N = Poly(L, [L(x.coords[0]) for x in P.num.coeffs])
    D = Poly(L, [L(x.coords[0]) for x in P.den.coeffs])
    f = D if c is INF else N - D * c
    degs = []
    for fac, mult in f.squarefree_decomposition():
        degs.extend([mult] * fac.degree)
    if d - f.degree > 0:
        degs.append(d - f.degree)
    return tuple(sorted(degs, reverse=True))


def _critical_value_candidates(P: RationalMap):
    import sympy

    z, c = sympy.symbols("z c")
    N = _poly_to_sympy(P.num, z)
    D = _poly_to_sympy(P.den, z)
    W = sympy.expand(sympy.diff(N, z) * D - N * sympy.diff(D, z))
    cands = {AlgebraicPointSet(point=INF)}
    inf_val = P(INF)
    if inf_val is not INF:
        cands.add(AlgebraicPointSet(point=P.field(inf_val.coords[0])))
    if sympy.Poly(W, z).degree() >= 1:
        res = sympy.resultant(sympy.Poly(N - c * D, z), sympy.Poly(W, z))
        res = sympy.Poly(res.as_expr() if hasattr(res, "as_expr") else res, c)
        if res.degree() >= 1:
            _, factors = sympy.factor_list(res.as_expr(), c, domain="QQ")
            for fac, _m in factors:
                fp = sympy.Poly(fac, c, domain="QQ")
                if fp.degree() < 1:
                    continue
                coeffs = [Fraction(int(x.p), int(x.q)) for x in fp.all_coeffs()[::-1]]
                lc = coeffs[-1]
                coeffs = tuple(x / lc for x in coeffs)
                if len(coeffs) == 2:
                    cands.add(AlgebraicPointSet(point=P.field(-coeffs[0])))
                else:
                    cands.add(AlgebraicPointSet(min_poly=coeffs))
    return sorted(cands, key=lambda a: a.sort_key())


def critical_structure(P: RationalMap) -> RamificationPortrait:
    """Critical values of P with the local-degree multiset of each fiber."""
    if P.degree < 2:
        raise ValueError("critical_structure needs deg P >= 2")
    if not P.is_rational():
        raise FieldError("critical_structure supports maps with rational coefficients")
    entries = []
    for cand in _critical_value_candidates(P):
        if cand.is_literal():
            pt = cand.point
            L = QQ
            val = INF if pt is INF else QQ(pt.coords[0])
        else:
            L = FieldSpec("simple-extension", cand.min_poly, None, check=False)
            val = L.gen()
        degs = _local_degrees_over(P, val, L)
        if sum(degs) != P.degree:
            raise ArithmeticError("fiber multiplicities do not sum to deg P")
        if any(k > 1 for k in degs):
            entries.append(PortraitEntry(cand, degs))
    portrait = RamificationPortrait(P.degree, tuple(entries))
    if portrait.riemann_hurwitz_total() != 2 * P.degree - 2:
        raise ArithmeticError("Riemann-Hurwitz count failed; critical values incomplete")
    return portrait


# --- fibers -----------------------------------------------------------------------

@dataclass
class FiberPoint:
    point: object  # ExactScalar, INF or ComplexBall
    multiplicity: int

    @property
    def exact(self) -> bool:
        return not isinstance(self.point, ComplexBall)

    def __repr__(self):
        return f"FiberPoint({point_str(self.point) if self.exact else self.point}, x{self.multiplicity})"


def fiber(P: RationalMap, c, precision: int = 64, hints=(), exact_only: bool = False,
          cap: int = DEFAULT_PRECISION_CAP):
    """P^{-1}(c) with multiplicities: exact points when in the field, else balls.

    ``hints`` are candidate exact roots tried first (e.g. deck images).  With
    ``exact_only`` the search for field roots stops after the hints and the
    rational-root step; remaining roots are returned as balls.
    """
    K = P.field
    d = P.degree
    if c is INF:
        f = P.den
    else:
        c = K(c)
        f = P.num - P.den * c
    out = []
    if d - f.degree > 0:
        out.append(FiberPoint(INF, d - f.degree))
    for fac, mult in f.squarefree_decomposition():
        rest = fac
        for h in hints:
            if h is INF or rest.degree < 1:
                continue
            h = K(h)
            if rest(h).is_zero():
                out.append(FiberPoint(h, mult))
                rest = rest.exact_div(Poly(K, [-h, 1]))
        if rest.degree >= 1:
            if exact_only:
                roots = _rational_roots(Poly(QQ, rest.rational_coeffs())) \
                    if rest.is_rational() else []
                roots = [K(r.coords[0]) for r in roots]
            else:
                roots = roots_in_field(rest)
            for r in roots:
                out.append(FiberPoint(r, mult))
                rest = rest.exact_div(Poly(K, [-r, 1]))
        if rest.degree >= 1:
            if K.embedding is None and K is not QQ:
                raise FieldError("field has no embedding for numerical fiber points")
            prec = precision
            while True:
                coeffs = rest.numeric_coeffs(None, prec + 20)
                try:
                    balls = isolate_roots(coeffs, prec + 20, cap)
                    break
                except PrecisionCapExceeded:
                    raise
            for b in balls:
                out.append(FiberPoint(b, mult))
    total = sum(fp.multiplicity for fp in out)
    if total != d:
        raise ArithmeticError("fiber size mismatch")
    return out


# --- common right factors and left factors -----------------------------------

def _image_curve(P: RationalMap, Q: RationalMap):
    """Squarefree part of Res_z(N_P - x D_P, N_Q - y D_Q), x- and y-free factors dropped."""
    import sympy

    z, x, y = sympy.symbols("z x y")
    A = sympy.Poly(_poly_to_sympy(P.num, z) - x * _poly_to_sympy(P.den, z), z)
    B = sympy.Poly(_poly_to_sympy(Q.num, z) - y * _poly_to_sympy(Q.den, z), z)
    res = sympy.resultant(A, B)
    res = sympy.expand(res.as_expr() if hasattr(res, "as_expr") else res)
    _, factors = sympy.factor_list(res, x, y, domain="QQ")
    kept = [f for f, _m in factors
            if sympy.degree(f, x) > 0 and sympy.degree(f, y) > 0]
    return kept


def image_curve_factors(P: RationalMap, Q: RationalMap):
    """Q-irreducible factors of the image curve of z -> (P(z), Q(z))."""
    return _image_curve(P, Q)


def fiber_product_curve_factors(P: RationalMap, Q: RationalMap):
    """Q-irreducible factors of N_P(x) D_Q(y) - N_Q(y) D_P(x), the curve P(x) = Q(y)."""
    import sympy

    if not (P.is_rational() and Q.is_rational()):
        raise ValueError("fiber product curve needs rational coefficients")
    x, y = sympy.symbols("x y")
    F = sympy.expand(_poly_to_sympy(P.num, x) * _poly_to_sympy(Q.den, y)
                     - _poly_to_sympy(Q.num, y) * _poly_to_sympy(P.den, x))
    _, factors = sympy.factor_list(F, x, y, domain="QQ")
    return [f for f, _m in factors]


def common_right_factor_degree(P: RationalMap, Q: RationalMap) -> int:
    """Degree of the maximal common compositional right factor of P and Q."""
    if P.degree < 1 or Q.degree < 1:
        raise ValueError("maps must be non-constant")
    if P.is_rational() and Q.is_rational():
        import sympy

        x, y = sympy.symbols("x y")
        kept = _image_curve(P, Q)
        dx = sum(sympy.degree(f, x) for f in kept)
        dy = sum(sympy.degree(f, y) for f in kept)
        if dy == 0 or dx == 0 or P.degree % dy or Q.degree % dx:
            raise ArithmeticError("image curve degrees inconsistent with map degrees")
        w1, w2 = P.degree // dy, Q.degree // dx
        if w1 != w2:
            raise ArithmeticError(f"inconsistent right-factor degrees {w1} != {w2}")
        return w1
    return common_right_factor_degree_by_gcd(P, Q)


def common_right_factor_degree_by_gcd(P: RationalMap, Q: RationalMap, samples: int = 6) -> int:
    """deg W as the generic number of common points of the fibers of P and Q.

    For a sample point s the points z with P(z) = P(s) and Q(z) = Q(s) form
    one fiber of W unless s is special; the minimum over several samples is
    taken.
    """
    K = _join_fields(P.field, Q.field)
    best = None
    for s in range(2, 2 + 4 * samples):
        if best is not None and samples <= 0:
            break
        pt = K(Fraction(s, 3) + s)
        pv, qv = P(pt), Q(pt)
        if pv is INF or qv is INF:
            continue
        fp = P.num.with_field(K) - P.den.with_field(K) * pv
        fq = Q.num.with_field(K) - Q.den.with_field(K) * qv
        g = fp.gcd(fq)
        # infinity is a common point only if both drop degree
        inf_p = P.degree - fp.degree
        inf_q = Q.degree - fq.degree
        count = g.degree + min(inf_p, inf_q)
        best = count if best is None else min(best, count)
        samples -= 1
    return best


def left_factor(A: RationalMap, P: RationalMap) -> RationalMap:
    """F with A = F o P, or raise NotAFactor.

    Solves the linear system A_num * V(P) = A_den * U(P) for the coefficients
    of F = U/V (homogenized at degree deg A / deg P) and checks the result.
    """
    if A.degree % P.degree:
        raise ValueError(f"deg P = {P.degree} does not divide deg A = {A.degree}")
    K = _join_fields(A.field, P.field)
    e = A.degree // P.degree
    N, D = P.num.with_field(K), P.den.with_field(K)
    npow = [Poly(K, [1])]
    dpow = [Poly(K, [1])]
    for _ in range(e):
        npow.append(npow[-1] * N)
        dpow.append(dpow[-1] * D)
    basis = [npow[k] * dpow[e - k] for k in range(e + 1)]
    an, ad = A.num.with_field(K), A.den.with_field(K)
    cols = [ad * b * K(-1) for b in basis] + [an * b for b in basis]
    nrows = max(c.degree for c in cols) + 1
    rows = [[c.coeff(r) for c in cols] for r in range(nrows)]
    for vec in nullspace(rows, K):
        U = Poly(K, vec[:e + 1])
        V = Poly(K, vec[e + 1:])
        if U.is_zero() and V.is_zero() or V.is_zero():
            continue
        F = RationalMap(U, V, K)
        if F.degree == e and compose(F, P) == A:
            return F
    raise NotAFactor(f"{P} is not a right factor of {A}")
