#!/usr/bin/env python3
"""Minimality criteria: the unit-sphere conjugate and the mod-3 catalog.

Two flavors of minimality question for the family:

* |a|_p > 1 with an invariant sphere: when is the conjugated polynomial
  minimal on the whole unit sphere?  Two exact conditions decide it.
* p = 3, a = 1 mod 3, N even: which compact open pieces of the invariant
  ball 2 + 3Z_3 are minimal?  A residue catalog in (a mod 27, N mod 18)
  answers, and the level tables confirm.
"""

from fractions import Fraction

from padicdyn import (
    ResidueSet,
    build_sphere_polynomial,
    family_params,
    family_polynomial,
    is_minimal_to_depth,
    mod3_component_prediction,
    sphere_minimality_report,
)

print("== whole-sphere minimality (|a|_p > 1) ==")
cases = [(3, 7, Fraction(2, 729)), (5, 5, Fraction(2, 625)),
         (5, 2, Fraction(1, 5)), (2, 3, Fraction(3, 4))]
for p, N, a in cases:
    rep = sphere_minimality_report(family_params(p, N, a))
    parts = []
    if rep.cond1 is not None:
        parts.append(f"cond1(one covering cycle)={rep.cond1['holds']}")
    if rep.cond2 is not None:
        parts.append(f"cond2(it grows)={rep.cond2['holds']}")
    if rep.p2_evidence is not None:
        parts.append(f"2-adic obstruction: level-2 {rep.p2_evidence.get('level2_class', 'n/a')}")
    verdict = "minimal" if rep.minimal else "not minimal"
    print(f"p={p}, N={N}, a={a}: {verdict}  [{'; '.join(parts)}]")
    g = build_sphere_polynomial(family_params(p, N, a))
    depth = 5 if p <= 3 else 4
    confirmed = is_minimal_to_depth(g, ResidueSet.unit_sphere(p), depth)
    print(f"   level tables to depth {depth} agree: {confirmed == rep.minimal}")

print("\n== the mod-3 component catalog (p = 3, even N) ==")
for a, N in [(4, 2), (1, 4), (4, 10), (7, 4), (7, 2), (16, 8), (1, 6), (1, 2)]:
    pred = mod3_component_prediction(a, N)
    sets = [s.spec_string() for s in pred.minimal_sets()]
    extra = " (attracting fixed point)" if pred.attracting == "fixed-point" else ""
    print(f"a={a:2d}, N={N:2d} (a mod 27 = {pred.a_mod_27}, N mod 18 = {pred.N_mod_18}):"
          f" item {pred.item}{extra}")
    print(f"   predicted minimal: {sets if sets else 'none of the cataloged sets'}")
    f = family_polynomial(family_params(3, N, Fraction(a)))
    observed = [c.label for c in pred.claims
                if all(is_minimal_to_depth(f, s, 5) for s in c.sets)]
    print(f"   observed minimal to depth 5: {observed if observed else 'none'}")
