#!/usr/bin/env python3
"""Root certificates and Newton lifting over Z_p.

A seed residue passes a family of exact valuation inequalities; passing
guarantees a unique nearby root, which Newton iteration then pins down to
any requested precision with quadratic progress asserted at every step.
"""

from fractions import Fraction

from padicdyn import (
    PadicPolynomial,
    brute_force_unity_shift_roots,
    count_unity_shift_roots,
    family_fixed_points,
    hensel_lift,
    hensel_report,
    unique_seed_scan,
)

print("== a square root of -1 in Q_5 ==")
F = PadicPolynomial.make(5, [1, 0, 1])  # x**2 + 1
rep = hensel_report(F, 2, L=1, s=1)
print(f"certificate at seed 2: passes={rep.passes}, "
      f"v(F(2))={rep.f_valuation}, v(F'(2))={rep.fprime_valuation}")
root = hensel_lift(F, 2, 40, report=rep)
print(f"root = {root.residue(6)} mod 5^6;  root^2 + 1 = 0 mod 5^40: "
      f"{F.eval_mod(root.residue(40), 40) == 0}")
print(f"seed scan finds exactly one root bucket: {unique_seed_scan(F, rep) == 1}")

print("\n== the same equation has no 2-adic root ==")
F2 = PadicPolynomial.make(2, [1, 0, 1])
rep2 = hensel_report(F2, 1, L=1, s=1)
print(f"certificate at seed 1 fails: {not rep2.passes} "
      f"(the inequality needs |F(1)| < |F'(1)|^2 = 1/4, but |F(1)| = 1/2)")

print("\n== counting roots of x^N = -1 mod p ==")
for N, p in [(2, 5), (4, 5), (3, 7), (6, 13)]:
    formula = count_unity_shift_roots(N, p)
    brute = brute_force_unity_shift_roots(N, p)
    print(f"x^{N} = -1 mod {p}: formula {formula}, brute force {brute}")

print("\n== fixed points of the family map ==")
print("(x**2 + 1)/5 over Q_5 has fixed points where x**2 - 5x + 1 = 0:")
for r in family_fixed_points(5, 2, Fraction(5), precision=30):
    print(f"  residue mod 5: {r.residue(1)}, mod 125: {r.residue(3)}")
print("(x**3 + 1)*9 over Q_3 has its finite fixed point at norm 1/9:")
x0 = family_fixed_points(3, 3, Fraction(1, 9), precision=30)[0]
print(f"  |x0|_3 = {x0.norm()}")
