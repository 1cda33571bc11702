"""Branched coverings of the sphere as permutation tuples.

Conventions: permutations are stored 0-based as tuples of images and shown
1-based.  ``mul(p, q)`` applies p first, then q, matching the concatenation of
lifted loops.  A constellation (s_1, ..., s_k) satisfies s_1 * ... * s_k = 1.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .maps import INF, is_inf, point_from_json, point_sort_key, point_to_json, point_str
from .scalar import ExactScalar, QQ

DEFAULT_GROUP_CAP = 10080


class InvalidConstellation(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


# --- permutations -------------------------------------------------------------------

def identity(d):
    return tuple(range(d))


def mul(p, q):
    """p then q."""
    return tuple(q[i] for i in p)


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def product(perms, d):
    acc = identity(d)
    for p in perms:
        acc = mul(acc, p)
    return acc


def cycles(p):
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = p[j]
            out.append(tuple(cyc))
    return out


def cycle_type(p):
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def perm_order(p):
    return lcm(*(len(c) for c in cycles(p))) if p else 1


def cycle_str(p):
    cs = [c for c in cycles(p) if len(c) > 1]
    if not cs:
        return "()"
    return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cs)


def parse_perm(x, d):
    """Permutation from 1-based images or from cycle notation like "(1 2)(3)"."""
    if isinstance(x, str):
        images = list(range(d))
        for body in re.findall(r"\(([^()]*)\)", x):
            pts = [int(t) - 1 for t in re.split(r"[\s,]+", body.strip()) if t]
            for a, b in zip(pts, pts[1:] + pts[:1]):
                images[a] = b
        if re.sub(r"\(([^()]*)\)", "", x).strip():
            raise InvalidConstellation(f"bad cycle notation {x!r}")
        p = tuple(images)
    else:
        p = tuple(int(i) - 1 for i in x)
    if sorted(p) != list(range(d)):
        raise InvalidConstellation(f"{x!r} is not a permutation of 1..{d}")
    return p


def group_closure(gens, d, cap=DEFAULT_GROUP_CAP):
    """Elements of <gens> in BFS order, or None when more than cap are found."""
    ident = identity(d)
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                order.append(y)
                if len(seen) > cap:
                    return None
                queue.append(y)
    return order


def is_transitive(perms, d):
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for p in perms:
            j = p[i]
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == d


# --- labels -------------------------------------------------------------------------

def label_key(label):
    if isinstance(label, ExactScalar) or is_inf(label):
        return (0, point_sort_key(label))
    return (1, str(label))


def label_str(label):
    if isinstance(label, ExactScalar) or is_inf(label):
        return point_str(label)
    return str(label)


def label_to_json(label):
    if isinstance(label, ExactScalar) or is_inf(label):
        return point_to_json(label)
    return {"label": str(label)}


def label_from_json(x, field=QQ):
    if isinstance(x, dict) and "label" in x:
        return x["label"]
    try:
        return point_from_json(x, field)
    except (ValueError, TypeError, ZeroDivisionError):
        if isinstance(x, str):
            return x
        raise


# --- constellations -----------------------------------------------------------------

@dataclass(frozen=True)
class Constellation:
    degree: int
    branch_points: tuple
    perms: tuple

    def __post_init__(self):
        d = self.degree
        if d < 1:
            raise InvalidConstellation("degree must be positive")
        if len(self.branch_points) != len(self.perms):
            raise InvalidConstellation("one permutation per branch point")
        keys = [label_key(b) for b in self.branch_points]
        if len(set(keys)) != len(keys):
            raise InvalidConstellation("branch points must be distinct")
        for p in self.perms:
            if len(p) != d or sorted(p) != list(range(d)):
                raise InvalidConstellation(f"not a permutation of degree {d}: {p}")
        if product(self.perms, d) != identity(d):
            raise InvalidConstellation("product of permutations is not the identity")
        if not is_transitive(self.perms, d):
            raise InvalidConstellation("monodromy action is not transitive")

    @classmethod
    def from_perms(cls, perms, branch_points=None, degree=None):
        perms = [tuple(p) for p in perms]
        d = degree if degree is not None else len(perms[0])
        if branch_points is None:
            branch_points = [f"b{i + 1}" for i in range(len(perms))]
        return cls(d, tuple(branch_points), tuple(perms))

    def cycle_types(self):
        return [cycle_type(p) for p in self.perms]

    def branch_data(self):
        """{label: cycle type}, identity entries dropped."""
        return {b: cycle_type(p) for b, p in zip(self.branch_points, self.perms)
                if p != identity(self.degree)}

    def to_json(self):
        return {"degree": self.degree,
                "branch_points": [label_to_json(b) for b in self.branch_points],
                "perms": [[i + 1 for i in p] for p in self.perms]}

    @classmethod
    def from_json(cls, data, field=QQ):
        d = int(data["degree"])
        perms = [parse_perm(x, d) for x in data["perms"]]
        bps = data.get("branch_points")
        labels = None if bps is None else [label_from_json(b, field) for b in bps]
        return cls.from_perms(perms, labels, d)

    def __str__(self):
        return "; ".join(f"{label_str(b)}: {cycle_str(p)}"
                         for b, p in zip(self.branch_points, self.perms))


def genus(c: Constellation) -> int:
    """Riemann-Hurwitz: 2 - 2g = 2d - sum (d - #cycles)."""
    d = c.degree
    total = sum(d - len(cycles(p)) for p in c.perms)
    if total % 2:
        raise InvalidConstellation(f"odd ramification total {total}")
    g = 1 - d + total // 2
    if g < 0:
        raise InvalidConstellation(f"negative genus {g}")
    return g


def align(cs):
    """Common ordered branch list for all constellations, identity where unbranched.

    New labels are inserted just before the next label they precede in their own
    list, so each constellation keeps its loop order and its product.
    """
    merged = []
    for c in cs:
        keys = [label_key(b) for b in c.branch_points]
        for idx, b in enumerate(c.branch_points):
            if any(label_key(m) == keys[idx] for m in merged):
                continue
            nxt = next((j for j in range(idx + 1, len(keys))
                        if any(label_key(m) == keys[j] for m in merged)), None)
            if nxt is None:
                merged.append(b)
            else:
                pos = [label_key(m) for m in merged].index(keys[nxt])
                merged.insert(pos, b)
    mkeys = [label_key(m) for m in merged]
    out = []
    for c in cs:
        own = {label_key(b): p for b, p in zip(c.branch_points, c.perms)}
        positions = [mkeys.index(k) for k in (label_key(b) for b in c.branch_points)]
        if positions != sorted(positions):
            raise InvalidConstellation("branch orders of the constellations are incompatible")
        perms = tuple(own.get(k, identity(c.degree)) for k in mkeys)
        out.append(Constellation(c.degree, tuple(merged), perms))
    return out


@dataclass(frozen=True)
class FiberComponent:
    orbit: tuple  # of index tuples, 0-based, sorted
    induced: Constellation
    degrees_to_factors: tuple
    genus: int

    def to_json(self):
        return {"orbit": [[i + 1 for i in t] for t in self.orbit],
                "degree": len(self.orbit),
                "degrees_to_factors": list(self.degrees_to_factors),
                "genus": self.genus,
                "induced": self.induced.to_json()}


def fiber_product(cs) -> list:
    """Components of the fiber product: orbits of the componentwise action."""
    if not cs:
        raise ValueError("empty constellation list")
    labels = [label_key(b) for b in cs[0].branch_points]
    for c in cs[1:]:
        if [label_key(b) for b in c.branch_points] != labels:
            raise InvalidConstellation("constellations are not aligned")
    k = len(cs[0].perms)
    degrees = [c.degree for c in cs]

    def act(t, j):
        return tuple(c.perms[j][x] for c, x in zip(cs, t))

    import itertools

    remaining = set(itertools.product(*(range(d) for d in degrees)))
    comps = []
    for start in sorted(remaining):
        if start not in remaining:
            continue
        orbit = {start}
        queue = [start]
        while queue:
            t = queue.pop()
            for j in range(k):
                u = act(t, j)
                if u not in orbit:
                    orbit.add(u)
                    queue.append(u)
        remaining -= orbit
        pts = tuple(sorted(orbit))
        index = {t: n for n, t in enumerate(pts)}
        perms = tuple(tuple(index[act(t, j)] for t in pts) for j in range(k))
        induced = Constellation(len(pts), cs[0].branch_points, perms)
        to_factors = []
        for i, d in enumerate(degrees):
            if len(pts) % d:
                raise ArithmeticError("orbit size not divisible by factor degree")
            to_factors.append(len(pts) // d)
        comps.append(FiberComponent(pts, induced, tuple(to_factors), genus(induced)))
    return comps


def projection_is_equivariant(comp: FiberComponent, cs, i: int) -> bool:
    """The i-th projection intertwines the induced and the i-th monodromy."""
    ind = comp.induced
    for j, p in enumerate(ind.perms):
        for n, t in enumerate(comp.orbit):
            if comp.orbit[p[n]][i] != cs[i].perms[j][t[i]]:
                return False
    return True


def monodromy_group(c: Constellation, cap: int = DEFAULT_GROUP_CAP):
    """(order, capped) of the group generated by the permutations."""
    els = group_closure(c.perms, c.degree, cap)
    if els is None:
        return cap, True
    return len(els), False


def normalization_genus(c: Constellation, cap: int = DEFAULT_GROUP_CAP) -> int:
    """Genus of the Galois closure via the regular action of the monodromy group."""
    order, capped = monodromy_group(c, cap)
    if capped:
        raise CapExceeded(f"monodromy group has more than {cap} elements")
    orders = [perm_order(p) for p in c.perms]
    # each s acts on G by right multiplication with |G|/ord(s) cycles
    total = sum(order - order // o for o in orders)
    if total % 2:
        raise InvalidConstellation("odd ramification total for the regular action")
    g = 1 - order + total // 2
    chi = 2 + sum((Fraction(1, o) - 1 for o in orders), Fraction(0))
    g2 = 1 - order * chi / 2
    if g2 != g:
        raise ArithmeticError(f"normalization genus mismatch {g} != {g2}")
    return g


def normalization_genus_tuple_oracle(c: Constellation, max_degree=5, max_order=120) -> int:
    """Genus of one component of the action on injective d-tuples (small scale only)."""
    d = c.degree
    if d > max_degree:
        raise CapExceeded(f"degree {d} above oracle scale {max_degree}")
    start = tuple(range(d))
    orbit = {start}
    queue = [start]
    while queue:
        t = queue.pop()
        for p in c.perms:
            u = tuple(p[x] for x in t)
            if u not in orbit:
                orbit.add(u)
                queue.append(u)
                if len(orbit) > max_order:
                    raise CapExceeded(f"tuple orbit exceeds {max_order}")
    pts = sorted(orbit)
    index = {t: n for n, t in enumerate(pts)}
    perms = [tuple(index[tuple(p[x] for x in t)] for t in pts) for p in c.perms]
    return genus(Constellation(len(pts), c.branch_points, tuple(perms)))


def extract_monodromy(P, precision: int = 64, cap=None):
    from .monodromy import extract_monodromy as _extract

    return _extract(P, precision=precision) if cap is None else _extract(P, precision, cap)
