from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import numeric_portrait
from sharedpre.maps import (INF, Moebius, NotAFactor, RationalMap, common_right_factor_degree,
                            common_right_factor_degree_by_gcd, compose, critical_structure,
                            fiber, fiber_product_curve_factors, image_curve_factors,
                            left_factor, map_from_expr, moebius_from_expr, roots_in_field)
from sharedpre.poly import Poly
from sharedpre.scalar import QQ, QQI, cyclotomic_field, root_of_unity

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
coeff_lists = st.lists(st.integers(-9, 9), min_size=1, max_size=6)

CORPUS = ["z^2", "z^3", "z^4", "z^5", "z^6", "(z^2+z^(-2))/2", "(z^3+z^(-3))/2",
          "(z^4+z^(-4))/2", "(z^5+z^(-5))/2", "z^3-3*z", "z^4-2*z^2", "z^4+z^3", "z^4-4*z",
          "(z+1)^2", "z+1/z", "(z^2+1)/(z^2-4)", "z^3/(z-1)"]


@given(coeff_lists, st.lists(st.integers(-9, 9), min_size=1, max_size=4))
def test_poly_division_identity(a, b):
    A, B = Poly(QQ, a), Poly(QQ, b)
    if B.is_zero():
        return
    q, r = A.divmod(B)
    assert q * B + r == A
    assert r.is_zero() or r.degree < B.degree


@given(coeff_lists)
def test_squarefree_decomposition_reassembles(a):
    A = Poly(QQ, a)
    if A.degree < 1:
        return
    prod = Poly(QQ, [1])
    for f, m in A.squarefree_decomposition():
        prod = prod * f ** m
    assert prod == A.monic()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CORPUS), st.sampled_from(CORPUS), small)
def test_composition_agrees_with_evaluation(f, g, x):
    F, G = map_from_expr(f), map_from_expr(g)
    H = compose(F, G)
    assert H.degree == F.degree * G.degree
    assert H(QQ(x)) == F(G(QQ(x)))


@given(st.tuples(*[st.integers(-5, 5)] * 4), st.tuples(*[st.integers(-5, 5)] * 4), small)
def test_moebius_group_laws(m1, m2, x):
    if m1[0] * m1[3] - m1[1] * m1[2] == 0 or m2[0] * m2[3] - m2[1] * m2[2] == 0:
        return
    A, B = Moebius(*m1), Moebius(*m2)
    p = QQ(x)
    assert (A @ B)(p) == A(B(p))
    assert (A.inverse() @ A).is_identity()
    assert A.inverse()(A(p)) == p


def test_moebius_on_infinity_and_poles():
    m = moebius_from_expr("(z+1)/(z-1)")
    assert m(INF) == QQ(1)
    assert m(QQ(1)) is INF
    assert moebius_from_expr("z+1")(INF) is INF


def test_moebius_canonical_form():
    assert Moebius(2, 4, 0, 2) == Moebius(1, 2, 0, 1)
    assert Moebius(0, -2, -2, 0).key() == Moebius(0, 1, 1, 0).key()


def test_rational_map_json_roundtrip():
    K = cyclotomic_field(5)
    P = map_from_expr("(z^5+z^(-5))/2", K)
    assert RationalMap.from_json(P.to_json()) == P
    Q = map_from_expr("(z^2+1)/(z^2-4)")
    assert RationalMap.from_json(Q.to_json()) == Q


def _portrait_numeric(P):
    out = {}
    for e in critical_structure(P):
        for v in e.value.numeric_values(64):
            key = "inf" if v is INF else (round(float(v.real), 6) + 0.0,
                                          round(float(v.imag), 6) + 0.0)
            out[key] = e.local_degrees
    return out


@pytest.mark.parametrize("expr", CORPUS)
def test_critical_structure_matches_numeric_oracle(expr):
    P = map_from_expr(expr)
    oracle = numeric_portrait([float(c) for c in P.num.rational_coeffs()],
                              [float(c) for c in P.den.rational_coeffs()])
    assert _portrait_numeric(P) == oracle


@pytest.mark.parametrize("expr", CORPUS)
def test_riemann_hurwitz_total(expr):
    P = map_from_expr(expr)
    assert critical_structure(P).riemann_hurwitz_total() == 2 * P.degree - 2


def test_frozen_portraits():
    got = {str(e.value): e.local_degrees for e in critical_structure(map_from_expr("z^3-3*z"))}
    assert got == {"-2": (2, 1), "2": (2, 1), "inf": (3,)}
    got = {str(e.value): e.local_degrees for e in critical_structure(map_from_expr("z^4+z^3"))}
    assert got == {"-27/256": (2, 1, 1), "0": (3, 1), "inf": (4,)}
    got = {str(e.value): e.local_degrees for e in critical_structure(map_from_expr("z^4-4*z"))}
    assert got == {"-3": (2, 1, 1), "roots of c^2 - 3*c + 9": (2, 1, 1), "inf": (4,)}


def test_fiber_exact_and_numeric():
    P = map_from_expr("z^2")
    pts = fiber(P, QQ(4))
    assert sorted(p.point.to_fraction() for p in pts) == [-2, 2]
    pts = fiber(P, QQ(2))
    assert all(not p.exact for p in pts) and len(pts) == 2
    pts = fiber(map_from_expr("z^3-3*z"), QQ(2))
    assert sorted((p.multiplicity, str(p.point)) for p in pts) == [(1, "2"), (2, "-1")]
    pts = fiber(map_from_expr("z+1/z"), INF)
    assert sorted(str(p.point) for p in pts) == ["0", "inf"]


def test_dihedral_fiber_is_exact_over_cyclotomic_field():
    K = cyclotomic_field(5)
    P = map_from_expr("(z^5+z^(-5))/2", K)
    pts = fiber(P, P(K(2)))
    assert len(pts) == 10 and all(p.exact for p in pts)


def test_roots_in_field():
    K = cyclotomic_field(3)
    w = root_of_unity(3, K)
    z = Poly(K, [0, 1])
    f = (z - K(1)) * (z - w) * (z - w * w) * (z * z - K(2))
    roots = roots_in_field(f)
    assert set(roots) == {K(1), w, w * w}
    assert roots_in_field(Poly(QQI, [1, 0, 1])) == [QQI.gen(), -QQI.gen()] or \
        set(roots_in_field(Poly(QQI, [1, 0, 1]))) == {QQI.gen(), -QQI.gen()}


@pytest.mark.parametrize("p,q,expected", [
    ("z^2", "(z+1)^2", 1),
    ("z^4+z^2", "z^6", 2),
    ("(z^2+1)^3", "(z^2+1)^2", 2),
    ("z^2", "z+1/z", 1),
    ("z^4", "(z^4+1)/z^2", 2),
])
def test_common_right_factor_two_routes(p, q, expected):
    P, Q = map_from_expr(p), map_from_expr(q)
    assert common_right_factor_degree(P, Q) == expected
    assert common_right_factor_degree_by_gcd(P, Q) == expected


def test_image_and_fiber_product_curves():
    P, Q = map_from_expr("z^2"), map_from_expr("(z+1)^2")
    assert len(fiber_product_curve_factors(P, Q)) == 2
    assert len(image_curve_factors(P, Q)) == 1


@pytest.mark.parametrize("f,p", [("z^2-2*z", "z^2"), ("z^3", "z+1/z"),
                                 ("(w^2+1)/(2*w)", "z^2"), ("2*w^2-1", "(z+1/z)/2")])
def test_left_factor_recovers_outer_map(f, p):
    P = map_from_expr(p)
    F = map_from_expr(f.replace("w", "z"))
    A = compose(F, P)
    assert left_factor(A, P) == F


def test_left_factor_rejects_non_factor():
    with pytest.raises(NotAFactor):
        left_factor(map_from_expr("z^4+z"), map_from_expr("z^2"))
