#!/usr/bin/env python3
"""Level-by-level dynamics on Z_p: cycles, classes, lifts, minimality.

A polynomial with p-adic integer coefficients induces a self-map of
Z/p**n at every level n.  Each cycle of the induced map either grows,
splits, grows tails, or partially splits, and that class dictates the
shape of its lifts one level up.
"""

from fractions import Fraction

from padicdyn import (
    PadicPolynomial,
    ResidueSet,
    build_level_map,
    cycles_at_level,
    lift_cycles,
    minimal_decomposition,
    minimality_check,
)

f = PadicPolynomial.make(3, [Fraction(1, 4), 0, Fraction(1, 4)])   # (x**2+1)/4
dom = ResidueSet.single_class(3, 2, 1)

print("== the reduced maps of (x**2 + 1)/4 on 2 + 3 Z_3 ==")
for n in (1, 2, 3):
    m = build_level_map(f, dom, n)
    recs, _ = cycles_at_level(m)
    print(f"level {n}: table {m.table if n <= 2 else '...'}")
    for r in recs:
        print(f"  cycle {r.elements} length {r.length}: {r.cycle_class.value} "
              f"(alpha={r.alpha_mod_p}, beta={r.beta_mod_p} mod 3)")

print("\n== growing cycles triple in length each level ==")
print(f"single cycle at levels 1..5: {minimality_check(f, dom, 5)}")
print("so the subsystem on 2 + 3Z_3 is minimal to depth 5 (and forever,")
print("by the growth stability criterion at p = 3)")

print("\n== a grows-tails example: x**2 + 1 on Z_2 ==")
g = PadicPolynomial.make(2, [1, 0, 1])
m1 = build_level_map(g, ResidueSet.all_of_zp(2), 1)
recs, _ = cycles_at_level(m1)
rec = recs[0]
print(f"level-1 cycle {rec.elements}: {rec.cycle_class.value} (alpha = 0 mod 2)")
children, tails = lift_cycles(g, rec)
print(f"its lift: single {children[0].cycle_class.value} cycle plus {len(tails)} tail nodes")

print("\n== bounded-depth decomposition ==")
for a, label in [(4, "a=4: one minimal ball"), (7, "a=7: three minimal 9-balls")]:
    fa = PadicPolynomial.make(3, [Fraction(1, a), 0, Fraction(1, a)])
    rep = minimal_decomposition(fa, ResidueSet.all_of_zp(3), 5)
    comps = [(c.support.spec_string(), c.certificate) for c in rep.minimal_components]
    print(f"{label}: {comps}")
    print(f"  basin residues feeding the components: {len(rep.basin_assignments)}; "
          f"partition check: {rep.partition_ok()}")

print("\n== attracting orbit swallowing everything ==")
rep2 = minimal_decomposition(g, ResidueSet.all_of_zp(2), 6)
orbit = rep2.attracting_components[0].periodic_orbit
print(f"x**2 + 1 on Z_2: attracting 2-periodic orbit {orbit} (residues mod 2^12),")
print("with all of Z_2 in its basin")
