from fractions import Fraction
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, strategies as st

from sharedpre.maps import map_from_expr
from sharedpre.orbifold import (GENUS_GE_2, GENUS_LE_1, Signature, classify, euler_characteristic,
                                list_member, ramification_orbifold, verdict_from_signature)


@pytest.mark.parametrize("expr,sig,chi", [
    ("z^2", (2, 2), Fraction(1)),
    ("z^5", (5, 5), Fraction(2, 5)),
    ("z+1/z", (2, 2), Fraction(1)),
    ("(z+1)^2", (2, 2), Fraction(1)),
    ("z^3-3*z", (2, 2, 3), Fraction(1, 3)),
    ("(z^5+z^(-5))/2", (2, 2, 5), Fraction(1, 5)),
    ("z^4+z^3", (2, 3, 4), Fraction(1, 12)),
    ("z^4-4*z", (2, 2, 2, 4), Fraction(-1, 4)),
    ("z^4-2*z^2", (2, 2, 4), Fraction(1, 4)),
])
def test_frozen_signatures(expr, sig, chi):
    v = classify(map_from_expr(expr))
    assert v.signature.values == sig
    assert v.chi == chi
    assert v.genus_bound == (GENUS_LE_1 if chi >= 0 else GENUS_GE_2)


def test_conjugate_critical_values_count_separately():
    o = ramification_orbifold(map_from_expr("z^4-4*z"))
    sizes = sorted(c.size for c, _ in o.marked)
    assert sizes == [1, 1, 2]


def test_summary_text():
    assert classify(map_from_expr("z^5")).summary() == \
        "signature {5,5}; chi = 2/5; verdict: normalization genus <= 1"


def test_degree_one_rejected():
    with pytest.raises(ValueError):
        classify(map_from_expr("z+1"))


# the classical finite lists, written out by hand up to entries of size 12
def _classical(v):
    if len(v) == 2:
        return v[0] == v[1]
    if len(v) == 3:
        return v[:2] == (2, 2) or v in {(2, 3, 3), (2, 3, 4), (2, 3, 5), (3, 3, 3),
                                        (2, 4, 4), (2, 3, 6)}
    return v == (2, 2, 2, 2)


def test_list_matches_hand_enumeration():
    for n in range(2, 6):
        for v in combinations_with_replacement(range(2, 13), n):
            assert (list_member(v) is not None) == _classical(v), v


@given(st.lists(st.integers(2, 40), min_size=2, max_size=7))
def test_list_membership_iff_nonnegative_chi(values):
    # two marked points with different weights never come from a rational map
    if len(values) == 2 and values[0] != values[1]:
        return
    v = verdict_from_signature(Signature(tuple(sorted(values))))
    assert v.in_list == (v.chi >= 0)
    assert v.chi == 2 - sum(Fraction(nu - 1, nu) for nu in values)


def test_euler_characteristic_accepts_orbifold():
    o = ramification_orbifold(map_from_expr("z^3-3*z"))
    assert euler_characteristic(o) == Fraction(1, 3)


def test_unrealizable_pair_is_flagged():
    with pytest.raises(AssertionError):
        verdict_from_signature(Signature((2, 3)))
