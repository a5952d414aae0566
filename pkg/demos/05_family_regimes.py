#!/usr/bin/env python3
"""Regime map of the family phi(z) = a z**N / (z**N + 1) over Q_p.

Inverting the coordinate turns phi into the polynomial f(x) = (x**N + 1)/a,
and |a|_p alone splits the dynamics into escape, attraction, an invariant
sphere, or an expanding repeller.  Orbits certify escape by exact monotone
growth criteria, never by a magnitude heuristic.
"""

from fractions import Fraction

from padicdyn import (
    INFINITY,
    classify_regime,
    family_fixed_points,
    family_params,
    family_polynomial,
    orbit,
    rational_map_value,
)

print("== the coordinate inversion ==")
fp = family_params(5, 2, Fraction(5))
f = family_polynomial(fp)
z = Fraction(3, 7)
print(f"1/phi(z) = {1 / rational_map_value(fp, z)}")
print(f"f(1/z)   = {f.eval_exact(1 / z)}   (identical, as exact rationals)")

print("\n== regimes across parameters ==")
cases = [
    (3, 3, Fraction(1, 9)), (7, 3, Fraction(1, 7)), (5, 2, Fraction(5)),
    (5, 4, Fraction(5)), (2, 3, Fraction(2)), (2, 4, Fraction(2)),
    (2, 6, Fraction(2)), (2, 2, Fraction(4)), (5, 2, Fraction(1)),
]
for p, N, a in cases:
    verdict = classify_regime(family_params(p, N, a))
    print(f"p={p}, N={N}, a={a}: {verdict.tag:16s} {verdict.notes[0] if verdict.notes else ''}")

print("\n== orbits with exact certificates (p=3, N=3, a=1/9) ==")
params = family_params(3, 3, Fraction(1, 9))
x0 = family_fixed_points(3, 3, Fraction(1, 9), precision=70)[0]
for x, label in [(Fraction(1, 27), "|x| = 27"), (Fraction(1), "|x| = 1"),
                 (Fraction(1, 3), "|x| = 3 (the invariant sphere)"),
                 (INFINITY, "infinity")]:
    res = orbit(params, x, max_iter=60, precision=40, targets=[x0])
    print(f"start {label}: {res.verdict} after {res.steps} steps  [{res.certificate}]")

print("\ndistance trace of the converging orbit (valuations of x_k - x0):")
res = orbit(params, Fraction(1), max_iter=60, precision=40, targets=[x0])
print(f"  {res.distance_trace}")
print("once on the sphere of the fixed point, each step multiplies the")
print("distance by the exact factor |f'(x0)|_3 = 3**-7")
