"""Exact coefficient fields and certified complex balls.

Three kinds of field are supported: the rationals, the Gaussian rationals and
simple extensions ``Q[t]/(m(t))`` with a chosen complex embedding of ``t``.
Elements are coordinate vectors of Fractions in the power basis ``1, t, ...``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import math

import mpmath

DEFAULT_PRECISION_CAP = 4096

# embed() returns balls of radius <= 2**(-precision + EMBED_SLACK_BITS)
EMBED_SLACK_BITS = 4


class FieldError(ValueError):
    pass


class PrecisionCapExceeded(RuntimeError):
    pass


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to a rational")


def fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --- small dense polynomial helpers over Q (lists low-to-high) -------------

def _qstrip(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _qmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _qdivmod(a, b):
    a = _qstrip(a)
    b = _qstrip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lc = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lc
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] -= c * y
        a.pop()
        a = _qstrip(a)
    return q, a


def _qsub(a, b):
    n = max(len(a), len(b))
    return _qstrip([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                    for i in range(n)])


def _qinv_mod(a, m):
    """Inverse of a modulo m over Q by the extended Euclidean algorithm."""
    r0, r1 = _qstrip(m), _qstrip(a)
    s0, s1 = [], [Fraction(1)]
    while r1 and len(r1) > 1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qsub(s0, _qmul(q, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    c = r1[0]
    return [x / c for x in s1]


def _check_irreducible(min_poly):
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t**i
               for i, c in enumerate(min_poly))
    _, factors = sympy.factor_list(expr, t, domain="QQ")
    if len(factors) != 1 or factors[0][1] != 1:
        raise FieldError(f"minimal polynomial {expr} is reducible over Q")


# --- complex balls ---------------------------------------------------------

class ComplexBall:
    """Disc ``{z : |z - mid| <= rad}`` with mpmath midpoint and radius.

    Arithmetic propagates the input radii and adds a rounding bound of
    ``|result| * 2**(1 - prec)`` so every result encloses the exact value.
    """

    __slots__ = ("mid_re", "mid_im", "rad", "prec")

    def __init__(self, mid_re, mid_im=0, rad=0, prec=53):
        self.prec = prec
        with mpmath.workprec(prec):
            self.mid_re = mpmath.mpf(mid_re)
            self.mid_im = mpmath.mpf(mid_im)
            self.rad = mpmath.mpf(rad)
        if self.rad < 0:
            raise ValueError("negative radius")

    @classmethod
    def from_complex(cls, z, rad=0, prec=53):
        with mpmath.workprec(prec):
            z = mpmath.mpc(z)
        return cls(z.real, z.imag, rad, prec)

    @property
    def mid(self):
        # mpc() rounds to the ambient precision, so build it at ours
        with mpmath.workprec(self.prec):
            return mpmath.mpc(self.mid_re, self.mid_im)

    def _ulp(self, value, prec):
        return abs(value) * mpmath.ldexp(1, 1 - prec)

    def __add__(self, other):
        other = _as_ball(other, self.prec)
        prec = max(self.prec, other.prec)
        with mpmath.workprec(prec):
            m = self.mid + other.mid
            r = self.rad + other.rad + self._ulp(m, prec)
        return ComplexBall(m.real, m.imag, r, prec)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.mid_re, -self.mid_im, self.rad, self.prec)

    def __sub__(self, other):
        return self + (-_as_ball(other, self.prec))

    def __rsub__(self, other):
        return _as_ball(other, self.prec) - self

    def __mul__(self, other):
        other = _as_ball(other, self.prec)
        prec = max(self.prec, other.prec)
        with mpmath.workprec(prec):
            a, b = self.mid, other.mid
            m = a * b
            r = (abs(a) * other.rad + abs(b) * self.rad + self.rad * other.rad
                 + self._ulp(m, prec))
        return ComplexBall(m.real, m.imag, r, prec)

    __rmul__ = __mul__

    def inverse(self):
        with mpmath.workprec(self.prec):
            a = abs(self.mid)
            if a <= self.rad:
                raise ZeroDivisionError("ball contains zero")
            m = 1 / self.mid
            # |1/z - 1/a| <= r / (|a| (|a| - r))
            r = self.rad / (a * (a - self.rad)) + self._ulp(m, self.prec)
        return ComplexBall(m.real, m.imag, r, self.prec)

    def __truediv__(self, other):
        return self * _as_ball(other, self.prec).inverse()

    def contains(self, z) -> bool:
        with mpmath.workprec(self.prec):
            return abs(mpmath.mpc(z) - self.mid) <= self.rad

    def overlaps(self, other: "ComplexBall") -> bool:
        prec = max(self.prec, other.prec)
        with mpmath.workprec(prec):
            return abs(self.mid - other.mid) <= self.rad + other.rad

    def to_json(self):
        return {"re": mpmath.nstr(self.mid_re, 30), "im": mpmath.nstr(self.mid_im, 30),
                "rad": mpmath.nstr(self.rad, 5)}

    def __repr__(self):
        return (f"ComplexBall({mpmath.nstr(self.mid_re, 15)}, "
                f"{mpmath.nstr(self.mid_im, 15)}, rad={mpmath.nstr(self.rad, 3)})")


def _as_ball(x, prec):
    if isinstance(x, ComplexBall):
        return x
    if isinstance(x, Fraction):
        return rational_ball(x, prec)
    if isinstance(x, int):
        return rational_ball(Fraction(x), prec)
    return ComplexBall.from_complex(x, 0, prec)


def rational_ball(q: Fraction, prec: int) -> ComplexBall:
    q = to_fraction(q)
    den = q.denominator
    exact = (den & (den - 1)) == 0 and q.numerator.bit_length() <= prec
    with mpmath.workprec(prec):
        m = mpmath.mpf(q.numerator) / den
        r = 0 if exact else abs(m) * mpmath.ldexp(1, 1 - prec)
    return ComplexBall(m, 0, r, prec)


def to_mpc(c):
    if isinstance(c, Fraction):
        return mpmath.mpc(mpmath.mpf(c.numerator) / c.denominator)
    if isinstance(c, int):
        return mpmath.mpc(c)
    return mpmath.mpc(c)


# --- certified root isolation for polynomials with complex coefficients ----

def taylor_shift(coeffs, m):
    """Coefficients of f(m + h) in h (low-to-high), coeffs low-to-high."""
    a = list(coeffs)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] = a[j] + m * a[j + 1]
    return a


def certify_root_disc(coeffs, approx, prec):
    """Return radius r such that the disc D(approx, r) holds exactly one root.

    Uses the contraction test for the simplified Newton map: with
    q >= sup_D |f'(z) - f'(m)| / |f'(m)| < 1 and |f(m)/f'(m)| <= (1 - q) r
    the disc contains a unique root.  Returns None when the test fails.
    """
    with mpmath.workprec(prec):
        m = mpmath.mpc(approx)
        a = taylor_shift([to_mpc(c) for c in coeffs], m)
        if len(a) < 2 or a[1] == 0:
            return None
        step = abs(a[0] / a[1])
        eps = mpmath.ldexp(1, 8 - prec)
        r = max(2 * step, eps * max(1, abs(m)))
        for _ in range(4):
            bound = sum(k * abs(a[k]) * r ** (k - 1) for k in range(2, len(a)))
            q = bound / abs(a[1]) * (1 + eps)
            if q < mpmath.mpf(1) / 2 and step * (1 + eps) <= (1 - q) * r:
                return r
            r = r * 2 if q < mpmath.mpf(1) / 2 else r / 4
            if r < eps * max(1, abs(m)) / 16:
                return None
        return None


def polish_roots(coeffs, approx, prec, steps=60):
    """Newton-polish approximate roots of f (coeffs low-to-high) at prec bits."""
    with mpmath.workprec(prec + 10):
        cs = [to_mpc(c) for c in coeffs]
        out = []
        for z in approx:
            z = mpmath.mpc(z)
            for _ in range(steps):
                f = mpmath.mpc(0)
                df = mpmath.mpc(0)
                for c in reversed(cs):
                    df = df * z + f
                    f = f * z + c
                if df == 0:
                    break
                dz = f / df
                z -= dz
                if abs(dz) <= abs(z) * mpmath.ldexp(1, -prec - 4) or dz == 0:
                    break
            out.append(z)
        return out


def numeric_roots(coeffs, prec):
    """All complex roots of a squarefree polynomial (coeffs low-to-high)."""
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    deg = len(cs) - 1
    if deg < 1:
        return []
    with mpmath.workprec(prec + 20):
        hi = [to_mpc(c) for c in reversed(cs)]
        if deg == 1:
            return [-hi[1] / hi[0]]
        try:
            roots = mpmath.polyroots(hi, maxsteps=400, extraprec=2 * prec + 50)
        except mpmath.libmp.libhyper.NoConvergence:
            roots = mpmath.polyroots(hi, maxsteps=2000, extraprec=4 * prec + 200,
                                     error=False)
        if isinstance(roots, tuple):
            roots = roots[0]
    return polish_roots(cs, roots, prec)


def isolate_roots(coeffs, prec, cap=DEFAULT_PRECISION_CAP):
    """Certified pairwise-disjoint balls around every root of a squarefree f."""
    while True:
        roots = numeric_roots(coeffs, prec)
        balls = []
        ok = True
        for z in roots:
            r = certify_root_disc(coeffs, z, prec)
            if r is None:
                ok = False
                break
            balls.append(ComplexBall.from_complex(z, r, prec))
        if ok:
            for i in range(len(balls)):
                for j in range(i + 1, len(balls)):
                    if balls[i].overlaps(balls[j]):
                        ok = False
        if ok:
            return balls
        prec *= 2
        if prec > cap:
            raise PrecisionCapExceeded("root isolation failed below the precision cap")


# --- fields ----------------------------------------------------------------

class FieldSpec:
    """A declared exact coefficient field.

    ``kind`` is one of ``rationals``, ``gaussian-rationals`` or
    ``simple-extension``.  ``min_poly`` is monic, low-to-high.  ``embedding``
    is a certified ball isolating the chosen complex root of ``min_poly``;
    it may be None for internal fields that are never embedded.
    """

    def __init__(self, kind, min_poly=None, embedding=None, check=True, name=None):
        if kind not in ("rationals", "gaussian-rationals", "simple-extension"):
            raise FieldError(f"unknown field kind {kind!r}")
        if kind == "rationals":
            min_poly = (Fraction(-1), Fraction(1))  # basis {1}; t = 1 is never used
            self.degree = 1
        elif kind == "gaussian-rationals":
            min_poly = (Fraction(1), Fraction(0), Fraction(1))
            self.degree = 2
        else:
            min_poly = tuple(_qstrip(to_fraction(c) for c in min_poly))
            if len(min_poly) < 2:
                raise FieldError("minimal polynomial must have degree >= 1")
            lc = min_poly[-1]
            min_poly = tuple(c / lc for c in min_poly)
            self.degree = len(min_poly) - 1
            if check:
                _check_irreducible(min_poly)
        self.kind = kind
        self.min_poly = min_poly
        self.name = name
        if kind == "gaussian-rationals" and embedding is None:
            embedding = ComplexBall(0, 1, 0, 53)
        if embedding is not None and kind == "simple-extension":
            embedding = self._certify_embedding(embedding)
        self.embedding = embedding
        n = self.degree
        # t**k for k = n .. 2n-2 reduced to the power basis
        self._powers = []
        if kind != "rationals":
            cur = [-c for c in min_poly[:-1]]
            for _ in range(max(n - 1, 1)):
                self._powers.append(list(cur))
                shifted = [Fraction(0)] + cur
                top = shifted.pop()
                cur = [shifted[i] - top * min_poly[i] for i in range(n)]
        self._one = None

    # constructors
    @classmethod
    def rationals(cls):
        return QQ

    @classmethod
    def gaussian(cls):
        return QQI

    @classmethod
    def extension(cls, min_poly, root_approx=None, name=None, check=True):
        emb = None
        if root_approx is not None:
            emb = ComplexBall.from_complex(complex(root_approx), 0, 53)
        return cls("simple-extension", min_poly, emb, check=check, name=name)

    def _certify_embedding(self, ball):
        coeffs = [c for c in self.min_poly]
        roots = numeric_roots(coeffs, 128)
        target = ball.mid
        best = min(roots, key=lambda z: abs(z - target))
        return _certified_root_ball(coeffs, best, 128)

    def root_ball(self, prec):
        """Certified ball around the embedded generator at about ``prec`` bits."""
        if self.embedding is None:
            raise FieldError("field has no embedding")
        if self.kind == "gaussian-rationals":
            return ComplexBall(0, 1, 0, prec)
        return _root_ball_cached(self.min_poly, _ball_key(self.embedding), prec)

    def conjugate_roots(self, prec):
        """All roots of min_poly, the embedded one first (numeric)."""
        if self.kind == "rationals":
            return [mpmath.mpc(1)]
        roots = numeric_roots(list(self.min_poly), prec)
        if self.embedding is None:
            return roots
        target = self.embedding.mid
        roots.sort(key=lambda z: abs(z - target))
        return roots

    # elements
    def __call__(self, x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            if x.field is self or x.field == self:
                return x
            if x.is_rational():
                return self(x.coords[0])
            raise FieldError("field mismatch")
        if isinstance(x, (list, tuple)):
            cs = [to_fraction(c) for c in x]
            if len(cs) > self.degree:
                raise FieldError("too many coordinates")
            cs += [Fraction(0)] * (self.degree - len(cs))
            return ExactScalar(self, tuple(cs))
        q = to_fraction(x)
        return ExactScalar(self, (q,) + (Fraction(0),) * (self.degree - 1))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def gen(self):
        if self.kind == "rationals":
            raise FieldError("Q has no generator")
        return self([0, 1])

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FieldSpec):
            return NotImplemented
        if self.kind != other.kind or self.min_poly != other.min_poly:
            return False
        if self.kind != "simple-extension":
            return True
        if self.embedding is None or other.embedding is None:
            return self.embedding is None and other.embedding is None
        return self.embedding.overlaps(other.embedding)

    def __hash__(self):
        return hash((self.kind, self.min_poly))

    def __repr__(self):
        if self.kind == "rationals":
            return "QQ"
        if self.kind == "gaussian-rationals":
            return "QQ(i)"
        return f"Q[t]/({poly_str(self.min_poly, 't')})"

    def to_json(self):
        if self.name and self.name.startswith("Q(zeta_"):
            return {"kind": "cyclotomic", "n": int(self.name[7:-1])}
        d = {"kind": self.kind}
        if self.kind == "simple-extension":
            d["min_poly"] = [fraction_str(c) for c in self.min_poly]
        if self.embedding is not None and self.kind != "rationals":
            d["embedding"] = self.embedding.to_json()
        return d

    @classmethod
    def from_json(cls, d):
        if d is None:
            return QQ
        kind = d.get("kind", "rationals")
        if kind == "rationals":
            return QQ
        if kind == "gaussian-rationals":
            return QQI
        if kind == "cyclotomic":
            return cyclotomic_field(int(d["n"]))
        emb = d.get("embedding")
        ball = None
        if emb is not None:
            ball = ComplexBall(mpmath.mpf(emb["re"]), mpmath.mpf(emb.get("im", 0)),
                               0, 128)
        return cls("simple-extension", d["min_poly"], ball)

    # element (de)serialisation
    def element_to_json(self, a: "ExactScalar"):
        if self.kind == "rationals":
            return fraction_str(a.coords[0])
        if self.kind == "gaussian-rationals":
            return {"re": fraction_str(a.coords[0]), "im": fraction_str(a.coords[1])}
        return {"coords": [fraction_str(c) for c in a.coords]}

    def element_from_json(self, x):
        if isinstance(x, dict):
            if "coords" in x:
                return self(x["coords"])
            return self([x.get("re", "0"), x.get("im", "0")])
        return self(x)


def _ball_key(ball):
    return (mpmath.nstr(ball.mid_re, 40), mpmath.nstr(ball.mid_im, 40))


def _certified_root_ball(coeffs, approx, prec):
    cap = DEFAULT_PRECISION_CAP
    while prec <= cap:
        z = polish_roots(coeffs, [approx], prec)[0]
        r = certify_root_disc(coeffs, z, prec)
        if r is not None:
            return ComplexBall.from_complex(z, r, prec)
        prec *= 2
    raise PrecisionCapExceeded("could not certify the embedding root")


@lru_cache(maxsize=512)
def _root_ball_cached(min_poly, key, prec):
    approx = mpmath.mpc(mpmath.mpf(key[0]), mpmath.mpf(key[1]))
    return _certified_root_ball(list(min_poly), approx, max(prec, 64))


QQ = FieldSpec("rationals")
QQI = FieldSpec("gaussian-rationals")


@lru_cache(maxsize=None)
def cyclotomic_field(n: int) -> FieldSpec:
    """Q(zeta_n) with zeta_n embedded as exp(2 pi i / n)."""
    if n in (1, 2):
        return QQ
    if n == 4:
        return QQI
    import sympy

    t = sympy.Symbol("t")
    phi = sympy.Poly(sympy.cyclotomic_poly(n, t), t).all_coeffs()[::-1]
    root = complex(math.cos(2 * math.pi / n), math.sin(2 * math.pi / n))
    return FieldSpec.extension([int(c) for c in phi], root, name=f"Q(zeta_{n})",
                               check=False)


def root_of_unity(n: int, field: FieldSpec | None = None) -> "ExactScalar":
    """exp(2 pi i / n) as an element of cyclotomic_field(n) (or ``field``)."""
    K = cyclotomic_field(n) if field is None else field
    if n == 1:
        return K.one()
    if n == 2:
        return K(-1)
    if K.kind == "gaussian-rationals" and n == 4:
        return K([0, 1])
    if K is cyclotomic_field(n):
        return K.gen()
    raise FieldError(f"no primitive {n}-th root of unity known in {K}")


# --- elements --------------------------------------------------------------

class ExactScalar:
    """Immutable field element; coordinates in the power basis of its field."""

    __slots__ = ("field", "coords")

    def __init__(self, field: FieldSpec, coords):
        self.field = field
        self.coords = coords

    def _pair(self, other):
        """Common field and coordinates of self and other, or None."""
        if isinstance(other, (int, Fraction)):
            return self.field, self.coords, self.field(other).coords
        if not isinstance(other, ExactScalar):
            return None
        if other.field is self.field or other.field == self.field:
            return self.field, self.coords, other.coords
        if other.is_rational():
            return self.field, self.coords, self.field(other.coords[0]).coords
        if self.is_rational():
            return other.field, other.field(self.coords[0]).coords, other.coords
        raise FieldError("field mismatch")

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise FieldError(f"{self} is not rational")
        return self.coords[0]

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        K, a, b = p
        return ExactScalar(K, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        K, a, b = p
        return ExactScalar(K, tuple(x - y for x, y in zip(a, b)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        K, a, b = p
        n = K.degree
        if n == 1:
            return ExactScalar(K, (a[0] * b[0],))
        prod = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:n]
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if c:
                row = K._powers[k - n]
                for i in range(n):
                    out[i] += c * row[i]
        return ExactScalar(K, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        K = self.field
        if K.degree == 1:
            return ExactScalar(K, (1 / self.coords[0],))
        inv = _qinv_mod(_qstrip(self.coords), list(K.min_poly))
        inv = inv + [Fraction(0)] * (K.degree - len(inv))
        return ExactScalar(K, tuple(inv[:K.degree]))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, ExactScalar):
            return NotImplemented
        if other.field is not self.field and other.field != self.field:
            if self.is_rational() and other.is_rational():
                return self.coords[0] == other.coords[0]
            return False
        return self.coords == other.coords

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    def sort_key(self):
        return tuple(self.coords)

    def complex(self, prec=53):
        """Approximate complex value (floating, not certified)."""
        return embed(self, prec).mid

    def __repr__(self):
        return f"ExactScalar({self})"

    def __str__(self):
        K = self.field
        if self.is_rational():
            return fraction_str(self.coords[0])
        var = "i" if K.kind == "gaussian-rationals" else "t"
        return "(" + poly_str(self.coords, var) + ")"


def poly_str(coeffs, var="z") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        cs = str(c) if not isinstance(c, Fraction) else fraction_str(c)
        if k == 0:
            terms.append(cs)
            continue
        mon = var if k == 1 else f"{var}^{k}"
        if cs == "1":
            terms.append(mon)
        elif cs == "-1":
            terms.append("-" + mon)
        else:
            terms.append(f"{cs}*{mon}")
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


def embed(a: ExactScalar, precision: int = 53, cap: int = DEFAULT_PRECISION_CAP) -> ComplexBall:
    """Certified ball around the complex value of ``a``.

    The radius is at most ``2**(-precision + EMBED_SLACK_BITS)`` times
    ``max(1, |a|)``.
    """
    K = a.field
    if K.kind == "rationals" or a.is_rational():
        return rational_ball(a.coords[0], precision)
    if K.kind == "gaussian-rationals":
        re = rational_ball(a.coords[0], precision)
        im = rational_ball(a.coords[1], precision)
        return ComplexBall(re.mid_re, im.mid_re, re.rad + im.rad, precision)
    work = precision + 16
    while True:
        t = K.root_ball(work)
        acc = rational_ball(a.coords[-1], work)
        for c in reversed(a.coords[:-1]):
            acc = acc * t + rational_ball(c, work)
        with mpmath.workprec(work):
            target = mpmath.ldexp(1, -precision + EMBED_SLACK_BITS) * max(1, abs(acc.mid))
        if acc.rad <= target:
            return acc
        work *= 2
        if work > cap:
            raise PrecisionCapExceeded(f"embedding of {a} needs more than {cap} bits")


def rational_reconstruct(x, prec: int, max_den: int | None = None) -> Fraction | None:
    """Best rational approximation of the real mpf ``x`` with a small denominator.

    The default denominator bound is 2**(prec/4); the candidate is accepted only
    when it agrees with x to 3/4 of the working precision, which a genuine
    small-denominator rational does and a generic irrational does not.
    """
    with mpmath.workprec(prec + 10):
        xf = mpmath.mpf(x)
        if max_den is None:
            max_den = 2 ** max(8, prec // 4)
        if xf == 0:
            return Fraction(0)
        q = Fraction(int(mpmath.floor(xf * mpmath.ldexp(1, prec)))) / (2 ** prec)
        cand = q.limit_denominator(max_den)
        err = abs(xf - mpmath.mpf(cand.numerator) / cand.denominator)
        tol = mpmath.ldexp(1, -(3 * prec // 4)) * max(1, abs(xf))
        return cand if err <= tol else None
