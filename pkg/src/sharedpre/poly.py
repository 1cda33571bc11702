"""Dense univariate polynomials over a declared exact field."""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .scalar import ExactScalar, FieldError, FieldSpec, QQ, poly_str, to_mpc


class Poly:
    """Immutable polynomial; ``coeffs`` low-to-high with no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        cs = [field(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, field, coeffs):
        p = cls.__new__(cls)
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        p.field = field
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def monomial(cls, field, k, c=1):
        return cls(field, [0] * k + [c])

    @classmethod
    def x(cls, field=QQ):
        return cls(field, [0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> ExactScalar:
        return self.coeffs[-1] if self.coeffs else self.field.zero()

    def coeff(self, k) -> ExactScalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero()

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def with_field(self, field):
        return Poly(field, self.coeffs)

    def _unify(self, other):
        if isinstance(other, Poly):
            if other.field is self.field or other.field == self.field:
                return self.field, other
            if other.is_rational():
                return self.field, Poly(self.field, [c.coords[0] for c in other.coeffs])
            if self.is_rational():
                return other.field, other
            raise FieldError("field mismatch")
        return self.field, Poly(self.field, [other])

    def __add__(self, other):
        K, other = self._unify(other)
        a = self if K is self.field else self.with_field(K)
        n = max(len(a.coeffs), len(other.coeffs))
        z = K.zero()
        return Poly._raw(K, [(a.coeffs[i] if i < len(a.coeffs) else z)
                             + (other.coeffs[i] if i < len(other.coeffs) else z)
                             for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        K, other = self._unify(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.field(other) if not isinstance(other, ExactScalar) else other
            K = self.field
            if c.field != K and not c.is_rational():
                if not self.is_rational():
                    raise FieldError("field mismatch")
                K = c.field
            return Poly._raw(K, [K(x) * c for x in self.coeffs])
        K, other = self._unify(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(K, [])
        out = [K.zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return Poly._raw(K, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly(self.field, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: "Poly"):
        K, other = self._unify(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        b = other.coeffs
        inv_lc = b[-1].inverse()
        q = [K.zero()] * max(len(rem) - len(b) + 1, 0)
        while len(rem) >= len(b):
            c = rem[-1] * inv_lc
            s = len(rem) - len(b)
            q[s] = c
            for i, y in enumerate(b):
                rem[s + i] = rem[s + i] - c * y
            rem.pop()
            while rem and rem[-1].is_zero():
                rem.pop()
        return Poly._raw(K, q), Poly._raw(K, rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self):
        if self.is_zero():
            return self
        inv = self.lc().inverse()
        return Poly._raw(self.field, [c * inv for c in self.coeffs])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def deriv(self):
        return Poly._raw(self.field, [c * k for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly._raw(self.field, [c])
        return acc

    def reverse(self, n=None):
        """z**n * p(1/z) with n >= degree (default degree)."""
        n = self.degree if n is None else n
        cs = list(self.coeffs) + [self.field.zero()] * (n + 1 - len(self.coeffs))
        return Poly._raw(self.field, cs[::-1])

    def squarefree_decomposition(self):
        """Yun's algorithm: list of (factor, multiplicity) with monic factors."""
        f = self.monic()
        if f.degree < 1:
            return []
        out = []
        df = f.deriv()
        a = f.gcd(df)
        b = f.exact_div(a)
        c = df.exact_div(a)
        d = c - b.deriv()
        i = 1
        while b.degree > 0:
            a = b.gcd(d)
            b = b.exact_div(a)
            c = d.exact_div(a)
            if a.degree > 0:
                out.append((a, i))
            i += 1
            d = c - b.deriv()
        return out

    def squarefree_part(self):
        f = self.monic()
        return f.exact_div(f.gcd(f.deriv())) if f.degree > 0 else f

    def numeric_coeffs(self, root=None, prec=53):
        """Complex coefficients with the field generator replaced by ``root``."""
        with mpmath.workprec(prec + 10):
            if root is None:
                root = self.field.conjugate_roots(prec)[0]
            out = []
            for c in self.coeffs:
                acc = mpmath.mpc(0)
                for q in reversed(c.coords):
                    acc = acc * root + to_mpc(q)
                out.append(acc)
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return poly_str(self.coeffs, "z")

    def to_json(self):
        return [self.field.element_to_json(c) for c in self.coeffs] or ["0"]

    def rational_coeffs(self):
        return [c.to_fraction() for c in self.coeffs]


def clear_denominators(coeffs) -> list[int]:
    """Integer primitive multiple of a list of Fractions."""
    from math import gcd, lcm

    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g else ints


def nullspace(rows, field):
    """Basis of the right nullspace of a matrix over ``field`` (Gaussian elimination)."""
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][col].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][col].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][col].is_zero():
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero()] * ncols
        v[fc] = field.one()
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis
