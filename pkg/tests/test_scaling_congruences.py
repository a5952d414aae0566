"""Exact scaling at p = 2 and the congruence tables behind the mod-3 catalog.

These pin the inner arithmetic the analyzers rely on: the 2-adic disks
D(1, 1/4) and D(-1, 1/4) where the family map scales distances exactly, and
the level-1 / level-2 multiplier congruences that decide the minimal
component catalog at p = 3.
"""

import random
from fractions import Fraction

from padicdyn.cycles import CycleClass, classify_cycle
from padicdyn.family import family_params, family_polynomial
from padicdyn.padic import valuation_fraction, valuation_int


def test_two_adic_expansion_on_odd_disks():
    # For odd N and |a|_2 = 2**-k the map expands D(1, 1/4) by exactly 2**k:
    # v(f(x) - f(y)) = v(x - y) - k.
    rng = random.Random(21)
    for _ in range(150):
        N = rng.choice([3, 5, 7, 9])
        k = rng.randrange(1, 4)
        u = 2 * rng.randrange(0, 50) + 1
        a = Fraction(u * 2**k)
        sign = rng.choice([1, -1])
        x = sign * (1 + 4 * rng.randrange(0, 200))
        y = sign * (1 + 4 * rng.randrange(0, 200))
        if x == y:
            continue
        lhs = valuation_fraction((Fraction(x) ** N - Fraction(y) ** N) / a, 2)
        assert lhs == valuation_int(x - y, 2) - k, (N, k, x, y)


def test_two_adic_contraction_with_even_deep_N():
    # For 2|N with |N|_2 <= 1/4: |x**N - y**N| = |N| |x - y| on D(+-1, 1/4).
    rng = random.Random(22)
    for _ in range(150):
        N = rng.choice([4, 8, 12, 16, 20])
        sign = rng.choice([1, -1])
        x = sign * (1 + 4 * rng.randrange(0, 200))
        y = sign * (1 + 4 * rng.randrange(0, 200))
        if x == y:
            continue
        lhs = valuation_int(x**N - y**N, 2)
        assert lhs == valuation_int(N, 2) + valuation_int(x - y, 2), (N, x, y)


def _beta_at(a: int, N: int, point: int, level: int) -> int:
    """beta of the fixed point of the level map at ``point`` (must be fixed)."""
    f = family_polynomial(family_params(3, N, Fraction(a)))
    rec = classify_cycle(f, (point,), level)
    return rec.beta_mod_p


def test_level1_multiplier_table_mod_9():
    # For N = 2 mod 6 on the invariant ball: the level-1 fixed point 2 has
    # beta = 0 exactly when a = 7 mod 9 (split), otherwise it grows.
    for a in (1, 4, 7, 10, 13, 16, 19, 22, 25):
        for N in (2, 8, 14, 20):
            beta = _beta_at(a, N, 2, 1)
            assert (beta == 0) == (a % 9 == 7), (a, N, beta)


def test_level2_split_tables_mod_27():
    # With a = 7 mod 9 and N = 2 mod 6 the level-2 map fixes 2, 5, 8; each
    # beta vanishes exactly on the advertised residue pairs of
    # (a mod 27, N mod 18).
    def expect_zero(point, a27, n18):
        if point == 2:
            return (a27, n18) in {(7, 8), (16, 2), (25, 14)}
        if point == 5:
            return (a27, n18) in {(7, 14), (16, 2), (25, 8)}
        return a27 == 25  # point 8: any N = 2 mod 6
    for a in (7, 16, 25, 34, 43, 52, 61, 70, 79):
        for N in (2, 8, 14, 20, 26, 32):
            a27, n18 = a % 27, N % 18
            for point in (2, 5, 8):
                beta = _beta_at(a, N, point, 2)
                assert (beta == 0) == expect_zero(point, a27, n18), (a, N, point, beta)


def test_level2_conclusions_match_catalog_item_six():
    # All three 9-ball betas nonzero exactly in the two advertised cases.
    for a in (7, 16, 25, 34, 43, 52, 61, 70, 79):
        for N in (2, 8, 14, 20, 26, 32):
            a27, n18 = a % 27, N % 18
            all_grow = all(_beta_at(a, N, pt, 2) != 0 for pt in (2, 5, 8))
            advertised = (a27 == 7 and n18 == 2) or (a27 == 16 and n18 in (8, 14))
            assert all_grow == advertised, (a, N)


def test_partial_split_multiplier_for_n_4_mod_6():
    # N = 4 mod 6 makes the level-1 fixed point's multiplier 2 mod 3
    # (partial split) for every a = 1 mod 3.
    for a in (1, 4, 7, 13, 25):
        for N in (4, 10, 16, 22):
            f = family_polynomial(family_params(3, N, Fraction(a)))
            rec = classify_cycle(f, (2,), 1)
            assert rec.cycle_class is CycleClass.PARTIALLY_SPLITS
            assert rec.alpha_mod_p == 2
