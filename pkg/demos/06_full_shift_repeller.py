#!/usr/bin/env python3
"""The expanding disk system of (x**2 + 1)/5 over Q_5 and its symbolic coding.

The two fixed points sit in the disks of residue 2 and 3 mod 5; f expands
each disk by a factor of 5 and maps it over both, so the points whose whole
orbit stays in the disks carry a two-symbol full shift.  Digits of a point
are consumed one per iteration, which makes the coding computable to any
finite depth by exhaustive residue search.
"""

import random
from fractions import Fraction

from padicdyn import family_params, repeller_analysis

rep = repeller_analysis(family_params(5, 2, Fraction(5)), depth=6,
                        rng=random.Random(0), shift_samples=50)

print(f"symbols: {rep.symbol_count} disks at residues {rep.disk_residues} mod 5")
print(f"uniform expansion exponent tau = {rep.tau}  (|f(x)-f(y)| = 5 |x-y| on each disk)")
print(f"incidence matrix: {[list(r) for r in rep.incidence]}  irreducible: {rep.irreducible}")
print(f"cylinders of depth {rep.depth}: {rep.realized_word_count} of "
      f"{rep.symbol_count ** rep.depth} realized -> {rep.all_cylinders_realized}")
print(f"coding is injective at full depth: {len(set(rep.coding.values())) == len(rep.coding)}")
print(f"shift-equivariance spot checks: {rep.shift_checks}")
print(f"invariant set = unit-norm-forever set (pinned regime): "
      f"{rep.invariant_set_equals_unit_orbit_set}")

print("\nitineraries of the smallest coded residues mod 5**6:")
for r in sorted(rep.coding)[:8]:
    word = rep.coding[r]
    print(f"  {r:6d} -> {''.join(str(s) for s in word)}")

print("\na three-symbol example: (x**3 + 1)/7 over Q_7")
rep3 = repeller_analysis(family_params(7, 3, Fraction(7)), depth=4, rng=random.Random(0))
print(f"disks {rep3.disk_residues}, {rep3.realized_word_count} of 81 cylinders realized")
