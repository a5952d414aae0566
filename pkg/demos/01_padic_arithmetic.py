#!/usr/bin/env python3
"""A tour of exact finite-precision arithmetic in Q_p.

Numbers are stored as p**valuation * unit with a tracked relative
precision; norms and distances are exact powers of p, never floats.
"""

from fractions import Fraction

from padicdyn import (
    INFINITY,
    Ball,
    PadicNumber,
    reassemble_digits,
    spherical_distance_extended,
)

p = 5

print("== construction and display ==")
x = PadicNumber.from_rational(p, Fraction(7, 3))
y = PadicNumber.from_rational(p, 50)
print(f"7/3 in Q_5:  {x}")
print(f"50 in Q_5:   {y}   (norm {y.norm()}: two factors of 5)")

print("\n== arithmetic with precision tracking ==")
s = x + y
print(f"7/3 + 50 = {s}")
near1 = PadicNumber.from_rational(p, 1 + 5**10, 20)
one = PadicNumber.from_rational(p, 1, 20)
d = near1 - one
print(f"(1 + 5^10) - 1 carries v={d.valuation} with only {d.precision} digits left:")
print("  cancellation consumed ten of the twenty known digits.")

print("\n== digits round-trip ==")
digits = x.digits(8)
print(f"first 8 digits of 7/3: {digits}")
rebuilt = reassemble_digits(p, x.valuation, digits)
print(f"reassembled value agrees mod 5^8: {rebuilt == x}")

print("\n== the ultrametric at work ==")
a = PadicNumber.from_rational(p, 30)   # norm 1/5
b = PadicNumber.from_rational(p, 4)    # norm 1
print(f"|30|_5 = {a.norm()}, |4|_5 = {b.norm()}, |34|_5 = {(a + b).norm()}")
print("unequal norms force |x + y| = max(|x|, |y|): no carrying across scales")

print("\n== balls are congruence classes ==")
b1 = Ball.from_residue_class(p, 2, 2)
b2 = Ball.from_residue_class(p, 27, 2)
b3 = Ball.from_residue_class(p, 2, 1)
print(f"D(2, 5^-2) vs D(27, 5^-2): {b1.relation(b2).value} (27 = 2 mod 25)")
print(f"D(2, 5^-2) vs D(2, 5^-1):  {b1.relation(b3).value}")

print("\n== the spherical metric on the projective line ==")
for u, v in [(0, INFINITY), (Fraction(1, 25), INFINITY), (25, INFINITY), (2, 3)]:
    rho = spherical_distance_extended(p, u, v)
    print(f"rho({u}, {v}) = {rho}")
print("points of large norm sit close to infinity; everything fits in diameter 1")
