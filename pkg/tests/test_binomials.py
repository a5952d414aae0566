"""Digit-sum valuations of binomials and the norm bound."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicdyn.binomials import (
    binomial_bound_check,
    binomial_valuation,
    binomial_valuation_legendre,
    digit_sum,
    factorial_valuation,
    sweep_binomial_bound,
    sweep_valuation_agreement,
)
from padicdyn.errors import RangeError


def test_digit_sum_examples():
    assert digit_sum(4, 2) == 1  # 100 base 2
    assert digit_sum(0, 3) == 0
    # Oracle: 137 = 1022 base 5, digits sum to 5.
    assert digit_sum(137, 5) == 5


def test_binomial_valuation_examples():
    assert binomial_valuation(4, 2, 2) == 1  # C(4,2) = 6
    for n in (1, 17, 250):
        assert binomial_valuation(n, 0, 7) == 0
    with pytest.raises(RangeError):
        binomial_valuation(3, 5, 2)


def test_against_exact_binomial_oracle():
    # Third, independent oracle: factor p out of math.comb directly.
    rng = random.Random(6)
    for _ in range(300):
        p = rng.choice([2, 3, 5, 7])
        n = rng.randrange(0, 120)
        k = rng.randrange(0, n + 1)
        c = math.comb(n, k)
        v = 0
        while c % p == 0:
            c //= p
            v += 1
        assert binomial_valuation(n, k, p) == v
        assert binomial_valuation_legendre(n, k, p) == v


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2000), st.integers(0, 2000), st.sampled_from([2, 3, 5, 7, 11]))
def test_symmetry_and_route_agreement(n, k, p):
    if k > n:
        n, k = k, n
    assert binomial_valuation(n, k, p) == binomial_valuation(n, n - k, p)
    assert binomial_valuation(n, k, p) == binomial_valuation_legendre(n, k, p)


def test_factorial_valuation():
    # v_2(10!) = 8 (10! = 3628800 = 2**8 * 14175)
    assert factorial_valuation(10, 2) == 8
    assert factorial_valuation(0, 5) == 0


def test_bound_record_equality_case():
    rec = binomial_bound_check(4, 2, 2)
    assert rec.holds and rec.equality
    assert rec.lhs_exponent == rec.rhs_exponent == -2  # both sides 2**-2 = |4|_2


def test_bound_record_strict_cases():
    rec = binomial_bound_check(4, 2, 3)
    assert rec.holds and not rec.equality
    assert rec.lhs_exponent == -2 and rec.rhs_exponent == 0  # 3**-2 < 1 = |4|_3
    rec9 = binomial_bound_check(9, 0, 3)
    assert rec9.holds and not rec9.equality
    assert rec9.lhs_exponent == -8 and rec9.rhs_exponent == -2


def test_small_sweeps():
    checked, mismatches = sweep_valuation_agreement(7, 150)
    assert not mismatches and checked == sum(n + 1 for n in range(151))
    summary2 = sweep_binomial_bound(2, 60)
    assert not summary2.violations
    # Equality needs |N-1|_2 = 1 on top of p=2, K=N-2, i.e. even N only:
    # for odd N the left side is |N-1|_2 <= 1/2 < 1 = |N|_2.
    assert summary2.equalities == [(N, N - 2) for N in range(2, 61, 2)]
    summary5 = sweep_binomial_bound(5, 60)
    assert not summary5.violations and not summary5.equalities


def test_equality_requires_even_n_at_p2():
    rec = binomial_bound_check(3, 1, 2)
    assert rec.holds and not rec.equality
    assert rec.lhs_exponent == -1 and rec.rhs_exponent == 0
    for N in range(2, 40):
        rec = binomial_bound_check(N, N - 2, 2)
        assert rec.equality == (N % 2 == 0)
