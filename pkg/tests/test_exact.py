"""Exact arithmetic: modular inverses, HJ continued fractions, h/e data."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pqk3.exact import (
    continued_fraction,
    hj_evaluate,
    mod_inverse,
    singularity_invariants,
)
from oracles import brute_force_inverse


def test_mod_inverse_examples():
    assert mod_inverse(2, 3) == 2
    for m in (2, 3, 7, 19, 38):
        assert mod_inverse(1, m) == 1
    assert brute_force_inverse(4, 13) == 10
    assert mod_inverse(4, 13) == 10


def test_mod_inverse_rejects_non_units():
    with pytest.raises(ValueError):
        mod_inverse(6, 9)
    with pytest.raises(ValueError):
        mod_inverse(0, 5)
    with pytest.raises(ValueError):
        mod_inverse(3, 1)


@given(st.integers(min_value=2, max_value=500), st.integers(min_value=1, max_value=500))
def test_mod_inverse_matches_brute_force(m, a):
    expected = brute_force_inverse(a % m, m)
    if expected is None:
        with pytest.raises(ValueError):
            mod_inverse(a, m)
    else:
        assert mod_inverse(a, m) == expected


def test_continued_fraction_examples():
    assert continued_fraction(3, 1) == [3]
    assert continued_fraction(3, 2) == [2, 2]
    assert continued_fraction(5, 3) == [2, 3]


def test_continued_fraction_rejects_bad_input():
    with pytest.raises(ValueError):
        continued_fraction(5, 0)
    with pytest.raises(ValueError):
        continued_fraction(5, 5)
    with pytest.raises(ValueError):
        continued_fraction(6, 2)


def test_continued_fraction_reproduces_fraction_exhaustively():
    import math

    for n in range(2, 41):
        for q in range(1, n):
            if math.gcd(n, q) != 1:
                continue
            chain = continued_fraction(n, q)
            assert all(b >= 2 for b in chain)
            assert hj_evaluate(chain) == Fraction(n, q)


def test_singularity_invariants_direct_evaluation():
    # direct evaluation of the correction formulas on the computed chain
    si = singularity_invariants(3, 1)
    assert si.chain == (3,)
    assert si.h == 2 - Fraction(2 + 1 + 1, 3) - (3 - 2) == Fraction(-1, 3)
    assert si.e == Fraction(5, 3)
    assert si.num_curves == 1

    si = singularity_invariants(3, 2)
    assert si.chain == (2, 2)
    assert si.h == 0
    assert si.e == Fraction(8, 3)
    assert si.num_curves == 2


def test_table1_row5_k_squared_assembles():
    s51 = singularity_invariants(5, 1)
    s53 = singularity_invariants(5, 3)
    assert s51.h == Fraction(-9, 5) and s51.e == Fraction(9, 5)
    assert s51.num_curves == 1
    total = Fraction(8 * (6 - 1) * (2 - 1), 5) + 10 * s51.h + 5 * s53.h
    assert total == -12


def test_order_two_singularity():
    si = singularity_invariants(2, 1)
    assert si.h == 0 and si.e == Fraction(3, 2) and si.chain == (2,)


def test_inverse_type_symmetry_exhaustively():
    import math

    for n in range(2, 31):
        for q in range(1, n):
            if math.gcd(q, n) != 1:
                continue
            a = singularity_invariants(n, q)
            b = singularity_invariants(n, a.q_prime)
            assert a.h == b.h
            assert a.e == b.e
            assert a.chain == tuple(reversed(b.chain))
