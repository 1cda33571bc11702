"""Numeric monodromy of rational maps by certified fiber tracking.

Loop convention: the base point b lies below every finite branch value.  The
finite branch values are ordered by the argument of (c - b), then by modulus;
each loop runs straight from b to a small circle around its branch value, once
around it counterclockwise, and back.  The loop around infinity is the circle
centered at the centroid of the finite branch values through b, traversed
clockwise.  With these choices the loops compose, in order, to the trivial loop,
so the permutation product is the identity.

Fiber points are kept in one of the two affine charts of the sphere (z or 1/z).
A step is accepted when every tracked point, after Newton refinement, has an
inclusion disc of radius d|f/f'| disjoint from all the others and it moved by
less than a third of its distance to the nearest other fiber point.
"""

from __future__ import annotations

import mpmath

from .constellation import Constellation, cycle_type, genus, InvalidConstellation
from .maps import INF, RationalMap, critical_structure
from .scalar import DEFAULT_PRECISION_CAP, PrecisionCapExceeded, numeric_roots, poly_str, to_mpc

MIN_STEP = 2.0 ** -24


class MonodromyValidationError(ArithmeticError):
    pass


class _NeedPrecision(Exception):
    pass


def _label_for(value, k):
    return f"root {k + 1} of {poly_str(value.min_poly, 'c')}"


def branch_values(P: RationalMap, prec: int):
    """[(label, complex value or INF, local degrees)] for every branch point of P."""
    out = []
    for entry in critical_structure(P):
        v = entry.value
        if v.is_literal():
            val = INF if v.point is INF else v.point.complex(prec)
            out.append((v.point, val, entry.local_degrees))
        else:
            roots = v.numeric_values(prec)
            roots.sort(key=lambda r: (float(mpmath.re(r)), float(mpmath.im(r))))
            for k, r in enumerate(roots):
                out.append((_label_for(v, k), r, entry.local_degrees))
    return out


class _Tracker:
    """Fiber of one rational map over a moving point c of the target sphere."""

    def __init__(self, P: RationalMap, prec: int):
        self.d = P.degree
        d = self.d
        root = P.field.conjugate_roots(prec)[0] if P.field.degree > 1 else None
        num = P.num.numeric_coeffs(root, prec)
        den = P.den.numeric_coeffs(root, prec)
        self.N = num + [mpmath.mpc(0)] * (d + 1 - len(num))
        self.D = den + [mpmath.mpc(0)] * (d + 1 - len(den))
        self.prec = prec
        self.tol = mpmath.ldexp(1, -prec // 2)

    def coeffs(self, c, chart):
        cs = [n - c * m for n, m in zip(self.N, self.D)]
        return cs if chart == 0 else cs[::-1]

    @staticmethod
    def _horner(cs, x):
        f = mpmath.mpc(0)
        df = mpmath.mpc(0)
        for a in reversed(cs):
            df = df * x + f
            f = f * x + a
        return f, df

    def value_at_infinity(self):
        """P(inf) as a complex number, or None when it is infinite."""
        if self.D[self.d] == 0:
            return None
        return self.N[self.d] / self.D[self.d]

    def initial_fiber(self, c):
        cs = self.coeffs(c, 0)
        roots = numeric_roots(cs, self.prec)
        if len(roots) != self.d:
            raise _NeedPrecision()
        pts = [self._rechart((0, z)) for z in roots]
        refined = self._refine(c, pts)
        if refined is None or not self._separated(refined):
            raise _NeedPrecision()
        return [p for p, _ in refined]

    @staticmethod
    def _rechart(pt):
        chart, x = pt
        if abs(x) > 1:
            return (1 - chart, 1 / x)
        return pt

    def _refine(self, c, pts):
        out = []
        charts = {0: self.coeffs(c, 0), 1: self.coeffs(c, 1)}
        for chart, x in pts:
            cs = charts[chart]
            for _ in range(12):
                f, df = self._horner(cs, x)
                if df == 0:
                    return None
                dx = f / df
                x = x - dx
                if abs(dx) <= self.tol * (1 + abs(x)):
                    break
            else:
                return None
            f, df = self._horner(cs, x)
            if df == 0:
                return None
            rad = self.d * abs(f / df)
            out.append((self._rechart((chart, x)), rad))
        return out

    @staticmethod
    def chordal(p, q):
        (c1, x1), (c2, x2) = p, q
        a1, b1 = (x1, 1) if c1 == 0 else (1, x1)
        a2, b2 = (x2, 1) if c2 == 0 else (1, x2)
        num = abs(a1 * b2 - a2 * b1)
        return num / (mpmath.sqrt(abs(a1) ** 2 + abs(b1) ** 2)
                      * mpmath.sqrt(abs(a2) ** 2 + abs(b2) ** 2))

    def _separated(self, refined):
        for i in range(len(refined)):
            for j in range(i + 1, len(refined)):
                (p, r), (q, s) = refined[i], refined[j]
                if self.chordal(p, q) <= 2 * (r + s):
                    return False
        return True

    def _separation(self, pts):
        seps = []
        for i, p in enumerate(pts):
            seps.append(min(self.chordal(p, q) for j, q in enumerate(pts) if j != i))
        return seps

    def step(self, pts, c_new):
        refined = self._refine(c_new, pts)
        if refined is None or not self._separated(refined):
            return None
        seps = self._separation(pts)
        for (p_old, s), (p_new, r) in zip(zip(pts, seps), refined):
            if self.chordal(p_old, p_new) + r >= s / 3:
                return None
        return [p for p, _ in refined]

    def track(self, pts, path):
        """Follow the fiber along path(t), t from 0 to 1."""
        t = mpmath.mpf(0)
        h = mpmath.mpf(1) / 16
        while t < 1:
            t_new = min(t + h, mpmath.mpf(1))
            nxt = self.step(pts, path(t_new))
            if nxt is None:
                h /= 2
                if h < MIN_STEP:
                    raise _NeedPrecision()
                continue
            pts, t = nxt, t_new
            h = min(h * 1.5, mpmath.mpf(1) / 4)
        return pts

    def match(self, start, end):
        """Permutation p with start[i] carried to start[p[i]]."""
        seps = self._separation(start)
        perm = []
        for q in end:
            dists = [self.chordal(q, p) for p in start]
            j = min(range(len(start)), key=lambda k: dists[k])
            if dists[j] >= seps[j] / 3:
                raise _NeedPrecision()
            perm.append(j)
        if sorted(perm) != list(range(len(start))):
            raise _NeedPrecision()
        return tuple(perm)


def _segment(a, b):
    return lambda t: a + (b - a) * t


def _arc(center, radius, theta0, sign=1):
    return lambda t: center + radius * mpmath.expj(theta0 + sign * 2 * mpmath.pi * t)


def _choose_base(finite, avoid):
    n = len(finite)
    m = sum(finite, mpmath.mpc(0)) / n if n else mpmath.mpc(0)
    spread = max((abs(f - m) for f in finite), default=mpmath.mpf(0))
    if spread == 0:
        spread = mpmath.mpf(1)
    for shift in (0.1234, -0.2718, 0.3141, -0.4142, 0.5772):
        b = m + spread * shift - 1j * (spread * 1.5 + 1)
        args = sorted(float(mpmath.arg(f - b)) for f in finite)
        if any(y - x < 1e-6 for x, y in zip(args, args[1:])):
            continue
        if any(abs(b - a) < spread * 1e-3 for a in avoid):
            continue
        return m, b
    raise ValueError("no admissible base point")


def _loop_paths(b, f, radius):
    u = (b - f) / abs(b - f)
    near = f + radius * u
    theta0 = mpmath.arg(u)
    return [_segment(b, near), _arc(f, radius, theta0), _segment(near, b)]


def _extract(maps, prec):
    with mpmath.workprec(prec):
        data = []
        for P in maps:
            data.append(branch_values(P, prec))
        labels = {}
        for bv in data:
            for lab, val, _ in bv:
                key = str(lab)
                labels.setdefault(key, (lab, val))
        finite = [(lab, val) for lab, val in labels.values() if val is not INF]
        trackers = [_Tracker(P, prec) for P in maps]
        avoid = [t.value_at_infinity() for t in trackers]
        avoid = [a for a in avoid if a is not None]
        m, b = _choose_base([v for _, v in finite], avoid)
        finite.sort(key=lambda lv: (float(mpmath.arg(lv[1] - b)), float(abs(lv[1] - b))))
        radii = []
        for i, (_, f) in enumerate(finite):
            others = [abs(f - g) for j, (_, g) in enumerate(finite) if j != i]
            others += [abs(f - a) for a in avoid if abs(f - a) > 0]
            radii.append(min(others + [abs(f - b)]) / 3)
        order = [lab for lab, _ in finite]
        has_inf = any(val is INF for _, val in labels.values())
        if has_inf:
            order.append(INF)
        results = []
        for tr in trackers:
            start = tr.initial_fiber(b)
            perms = []
            for (_, f), rad in zip(finite, radii):
                pts = start
                for piece in _loop_paths(b, f, rad):
                    pts = tr.track(pts, piece)
                perms.append(tr.match(start, pts))
            if has_inf:
                pts = tr.track(start, _arc(m, abs(b - m), mpmath.arg(b - m), sign=-1))
                perms.append(tr.match(start, pts))
            results.append(Constellation(tr.d, tuple(order), tuple(perms)))
        return results, data


def extract_monodromy_joint(maps, precision: int = 64, cap: int = DEFAULT_PRECISION_CAP):
    """Constellations of several maps over one shared base point and loop system."""
    prec = precision
    while True:
        try:
            cs, data = _extract(maps, prec)
            break
        except (_NeedPrecision, InvalidConstellation):
            prec *= 2
            if prec > cap:
                raise PrecisionCapExceeded(f"monodromy tracking failed at {cap} bits")
    for c, bv in zip(cs, data):
        _validate(c, bv)
    return cs


def extract_monodromy(P: RationalMap, precision: int = 64, cap: int = DEFAULT_PRECISION_CAP):
    if P.degree < 2:
        raise ValueError("extract_monodromy needs deg P >= 2")
    return extract_monodromy_joint([P], precision, cap)[0]


def _validate(c: Constellation, bv):
    expected = {str(lab): degs for lab, _, degs in bv}
    for lab, p in zip(c.branch_points, c.perms):
        want = expected.get(str(lab), (1,) * c.degree)
        if cycle_type(p) != tuple(want):
            raise MonodromyValidationError(
                f"cycle type {cycle_type(p)} over {lab} but local degrees {want}")
    if genus(c) != 0:
        raise MonodromyValidationError("extracted covering does not have genus 0")
