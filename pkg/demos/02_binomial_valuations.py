#!/usr/bin/env python3
"""Digit sums, binomial valuations, and the norm bound behind local scaling.

The quantity v_p(C(N, K)) counts the carries when adding K and N-K in base
p; two independent formulas compute it, and an inequality bounding
|C(N,K)|_p * p**(1-(N-K)) by |N|_p makes the family map scale distances
exactly on small disks.
"""

from padicdyn import (
    binomial_bound_check,
    binomial_valuation,
    binomial_valuation_legendre,
    digit_sum,
    sweep_binomial_bound,
    sweep_valuation_agreement,
)

print("== digit sums ==")
for n, p in [(4, 2), (137, 5), (100, 3)]:
    print(f"wt_{p}({n}) = {digit_sum(n, p)}")

print("\n== two routes to v_p(C(N, K)) ==")
for n, k, p in [(4, 2, 2), (10, 5, 5), (100, 37, 3)]:
    a = binomial_valuation(n, k, p)
    b = binomial_valuation_legendre(n, k, p)
    print(f"v_{p}(C({n},{k})): digit-sum route {a}, factorial route {b}")

checked, mismatches = sweep_valuation_agreement(3, 400)
print(f"exhaustive agreement at p=3 up to N=400: {checked} pairs, {len(mismatches)} mismatches")

print("\n== the norm bound and its equality case ==")
for N, K, p in [(4, 2, 2), (3, 1, 2), (4, 2, 3), (9, 0, 3)]:
    rec = binomial_bound_check(N, K, p)
    rel = "=" if rec.equality else "<"
    print(f"p={p}, N={N}, K={K}: p^{rec.lhs_exponent} {rel} p^{rec.rhs_exponent}"
          f"   (bound {'holds' if rec.holds else 'FAILS'})")

print("\nequality demands p = 2, K = N-2 and even N:")
summary = sweep_binomial_bound(2, 40)
print(f"  equalities up to N=40: {summary.equalities}")
print("  (for odd N the left side picks up the extra factor |N-1|_2 < 1)")
