import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import achievable_genera, brute_group_order
from sharedpre.constellation import (CapExceeded, Constellation, InvalidConstellation, align,
                                     cycle_str, cycle_type, fiber_product, genus, inverse,
                                     is_transitive, monodromy_group, mul, normalization_genus,
                                     normalization_genus_tuple_oracle, parse_perm, product,
                                     projection_is_equivariant)


def C(perms, labels=None, d=None):
    d = d or max(max(int(t) for t in p.replace("(", " ").replace(")", " ").split())
                 for p in perms if p.strip("()"))
    return Constellation.from_perms([parse_perm(p, d) for p in perms], labels, d)


@st.composite
def transitive_tuples(draw, max_degree=5, max_k=4, k=None):
    d = draw(st.integers(2, max_degree))
    k = k or draw(st.integers(2, max_k))
    if k == 2:
        # only full cycles are transitive here: conjugate the standard d-cycle
        relabel = draw(st.permutations(range(d)))
        cyc = [0] * d
        for i in range(d):
            cyc[relabel[i]] = relabel[(i + 1) % d]
        perms = [tuple(cyc)]
    else:
        perms = [tuple(draw(st.permutations(range(d)))) for _ in range(k - 1)]
    last = inverse(product(perms, d))
    perms.append(last)
    assume(is_transitive(perms, d))
    return Constellation.from_perms(perms, degree=d)


def test_cycle_notation_roundtrip():
    p = parse_perm("(1 3 2)(4)", 4)
    assert p == (2, 0, 1, 3)
    assert cycle_str(p) == "(1 3 2)"
    assert parse_perm([3, 1, 2, 4], 4) == p
    assert cycle_type(p) == (3, 1)
    with pytest.raises(InvalidConstellation):
        parse_perm([1, 1, 2], 3)


def test_mul_is_left_to_right():
    a, b = parse_perm("(1 2)", 3), parse_perm("(2 3)", 3)
    # 1 -> 2 under a, then 2 -> 3 under b
    assert mul(a, b)[0] == 2


@pytest.mark.parametrize("perms,g", [
    (["(1 2)", "(1 2)"], 0),
    (["(1 2 3)", "(1 3 2)"], 0),
    (["(1 2)", "(2 3)", "(1 2 3)"], 0),
    (["(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"], 0),
    (["(1 2 3)", "(1 2 3)", "(1 2 3)"], 1),
    (["(1 2)(3 4)", "(1 2)(3 4)", "(1 3)(2 4)", "(1 3)(2 4)"], 1),
    (["(1 2)", "(1 2)", "(1 2)", "(1 2)"], 1),
])
def test_frozen_genera(perms, g):
    assert genus(C(perms)) == g


def test_validation_errors():
    with pytest.raises(InvalidConstellation):
        C(["(1 2)", "(2 3)"])  # product is not 1
    with pytest.raises(InvalidConstellation):
        C(["(1 2)", "(1 2)"], d=3)  # not transitive
    with pytest.raises(InvalidConstellation):
        C(["(1 2)", "(1 2)"], labels=["a", "a"])


def test_json_roundtrip():
    c = Constellation.from_json({"degree": 4, "branch_points": ["0", "1", "-1", "inf"],
                                 "perms": ["(1 2)", "(2 3)", "(3 4)", "(1 2 3 4)"]})
    assert Constellation.from_json(c.to_json()) == c
    assert c.to_json()["perms"][3] == [2, 3, 4, 1]
    assert str(c) == "0: (1 2); 1: (2 3); -1: (3 4); inf: (1 2 3 4)"


def test_s4_example_matches_oracle():
    c = C(["(1 2)", "(2 3)", "(3 4)", "(1 2 3 4)"])
    assert genus(c) == 0
    assert achievable_genera(4, [(2, 1, 1), (2, 1, 1), (2, 1, 1), (4,)]) == {0}
    assert monodromy_group(c) == (24, False)
    assert normalization_genus(c) == normalization_genus_tuple_oracle(c)


@settings(max_examples=60, deadline=None)
@given(transitive_tuples())
def test_genus_is_achievable(c):
    types = c.cycle_types()
    if c.degree ** len(types) > 5 ** 3:
        types_ok = True
    else:
        types_ok = genus(c) in achievable_genera(c.degree, types)
    assert types_ok


@settings(max_examples=60, deadline=None)
@given(transitive_tuples())
def test_monodromy_group_order_matches_brute_force(c):
    assert monodromy_group(c) == (brute_group_order(list(c.perms), c.degree), False)


@settings(max_examples=60, deadline=None)
@given(transitive_tuples())
def test_normalization_genus_two_routes(c):
    assert normalization_genus(c) == normalization_genus_tuple_oracle(c)


def test_monodromy_group_cap():
    c = C(["(1 2)", "(1 2 3 4 5 6 7 8)", "(1 8 7 6 5 4 3)"], d=8)
    order, capped = monodromy_group(c, cap=100)
    assert capped
    with pytest.raises(CapExceeded):
        normalization_genus(c, cap=100)


def test_align_inserts_identities_and_keeps_products():
    a = C(["(1 2)", "(1 2)"], ["0", "inf"])
    b = C(["(1 2)", "(1 2)"], ["-1", "inf"])
    aa, bb = align([a, b])
    assert [str(x) for x in aa.branch_points] == ["0", "-1", "inf"]
    assert aa.perms[1] == (0, 1) and bb.perms[0] == (0, 1)


def test_align_rejects_incompatible_orders():
    a = C(["(1 2 3)", "(1 3 2)", "()"], ["x", "y", "w"], d=3)
    b = C(["(1 2)", "(1 2)"], ["y", "x"])
    with pytest.raises(InvalidConstellation):
        align([a, b])


def test_fiber_product_square_and_shifted_square():
    # z^2 against itself: diagonal and antidiagonal
    a = C(["(1 2)", "(1 2)"], ["0", "inf"])
    comps = fiber_product(align([a, a]))
    assert sorted(len(c.orbit) for c in comps) == [2, 2]
    assert all(c.genus == 0 for c in comps)
    assert [c.degrees_to_factors for c in comps] == [(1, 1), (1, 1)]


def test_fiber_product_coprime_cyclic():
    a = C(["(1 2)", "(1 2)"], ["0", "inf"])
    b = C(["(1 2 3)", "(1 3 2)"], ["0", "inf"])
    aa, bb = align([a, b])
    comps = fiber_product([aa, bb])
    assert len(comps) == 1
    comp = comps[0]
    assert len(comp.orbit) == 6 and comp.genus == 0 and comp.degrees_to_factors == (3, 2)
    assert projection_is_equivariant(comp, [aa, bb], 0)
    assert projection_is_equivariant(comp, [aa, bb], 1)


@st.composite
def tuple_pairs(draw):
    k = draw(st.integers(2, 3))
    return (draw(transitive_tuples(max_degree=4, k=k)),
            draw(transitive_tuples(max_degree=4, k=k)))


@settings(max_examples=40, deadline=None)
@given(tuple_pairs())
def test_fiber_product_partitions_the_product_set(pair):
    a, b = pair
    comps = fiber_product([a, b])
    pts = [t for c in comps for t in c.orbit]
    assert len(pts) == len(set(pts)) == a.degree * b.degree
    for comp in comps:
        for i in range(2):
            assert projection_is_equivariant(comp, [a, b], i)
