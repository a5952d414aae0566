"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings.  Criterion 2 is split: the inequality sweep and the
localization of equality cases pass; the literal "one equality per N at
p = 2" claim is implemented as stated and fails, because equality provably
requires even N (see the decisions ledger for the analysis).
"""

import random
import time
from fractions import Fraction

from padicdyn.binomials import sweep_binomial_bound, sweep_valuation_agreement
from padicdyn.cycles import (
    CycleClass,
    build_level_map,
    classify_cycle,
    cycles_at_level,
    grows_tails_basin,
    is_minimal_to_depth,
    validate_lift_tree,
)
from padicdyn.family import (
    build_sphere_polynomial,
    family_params,
    family_polynomial,
    mod3_component_prediction,
    orbit,
    sphere_minimality_report,
)
from padicdyn.geometry import ResidueSet
from padicdyn.hensel import (
    brute_force_unity_shift_roots,
    count_unity_shift_roots,
    family_fixed_points,
    hensel_lift,
    hensel_report,
    unique_seed_scan,
)
from padicdyn.padic import PPow, valuation_fraction, valuation_int
from padicdyn.polynomials import PadicPolynomial
from padicdyn.repeller import repeller_analysis
from padicdyn.sampling import random_rational_with_valuation


def _announce(number: int, name: str, started: float) -> None:
    print(f"ACCEPTANCE {number:2d} {name}: PASS ({time.monotonic() - started:.1f}s)")


def test_criterion_01_kummer_vs_legendre():
    started = time.monotonic()
    for p in (2, 3, 5, 7, 11):
        checked, mismatches = sweep_valuation_agreement(p, 500)
        assert not mismatches, f"valuation routes disagree at p={p}: {mismatches[:5]}"
        assert checked == sum(n + 1 for n in range(501))
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"criterion 1 took {elapsed:.1f}s (budget 30s)"
    _announce(1, "Kummer-vs-Legendre agreement (N <= 500, 5 primes)", started)


def test_criterion_02_binomial_bound_sweep():
    started = time.monotonic()
    for p in (2, 3, 5, 7, 11, 13):
        summary = sweep_binomial_bound(p, 300)
        assert not summary.violations, f"bound violated at p={p}: {summary.violations[:5]}"
        if p == 2:
            assert all(K == N - 2 for N, K in summary.equalities)
            assert summary.equalities == [(N, N - 2) for N in range(2, 301, 2)]
        else:
            assert not summary.equalities, f"unexpected equalities at p={p}"
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"criterion 2 took {elapsed:.1f}s (budget 60s)"
    _announce(2, "binomial norm bound sweep (zero violations; equalities at p=2, K=N-2)", started)


def test_criterion_02_equality_set_as_stated():
    """The literal claim: one equality per N at p = 2 (for every N).

    This is a spec defect: equality at p = 2, K = N - 2 requires even N,
    since the left side equals |N|_2 * |N-1|_2.  The sweep finds exactly one
    equality per even N and none for odd N (e.g. N = 3, K = 1 gives
    1/2 < 1 = |3|_2).  The assertion below implements the stated criterion
    faithfully and is expected to fail; see the decisions ledger.
    """
    summary = sweep_binomial_bound(2, 300)
    assert len(summary.equalities) == 299, (
        f"stated criterion expects one equality per N (299 total); the "
        f"mathematics yields {len(summary.equalities)} (one per even N); "
        "see decisions ledger entry on acceptance criterion 2"
    )


def test_criterion_03_root_count_formula():
    started = time.monotonic()
    primes = [p for p in range(2, 98) if all(p % d for d in range(2, p))]
    checked = 0
    for p in primes:
        for q in range(1, 21):
            if q % p == 0:
                continue
            for m in range(3):
                N = q * p**m
                formula = count_unity_shift_roots(N, p)
                brute = brute_force_unity_shift_roots(N, p)
                assert formula == brute, (p, N, formula, brute)
                checked += 1
    assert checked > 1000
    _announce(3, f"root count formula vs brute force ({checked} instances, p <= 97)", started)


def test_criterion_04_exact_local_scaling():
    started = time.monotonic()
    rng = random.Random(1404)
    done = 0
    while done < 200:
        p = rng.choice((3, 5, 7))
        N = rng.randrange(2, 51)
        v_a = rng.randrange(-3, 4)
        a = random_rational_with_valuation(rng, p, v_a, digits=4)
        w = rng.randrange(-3, 4)
        omega = random_rational_with_valuation(rng, p, w, digits=4)
        tau = w + rng.randrange(1, 4)  # radius p**-tau < |omega|
        x = omega + random_rational_with_valuation(rng, p, tau + rng.randrange(0, 3), digits=3)
        y = omega + random_rational_with_valuation(rng, p, tau + rng.randrange(0, 3), digits=3)
        if x == y:
            continue
        # |f(x) - f(y)| = (|N|/|a|) |omega|**(N-1) |x - y|, exactly.
        lhs = valuation_fraction((x**N - y**N) / a, p)
        rhs = valuation_int(N, p) + (N - 1) * w + valuation_fraction(x - y, p) - v_a
        assert lhs == rhs, (p, N, a, omega, x, y)
        done += 1
    _announce(4, "local scaling identity exact on 200 random instances", started)


def test_criterion_05_full_shift_repeller():
    started = time.monotonic()
    rep = repeller_analysis(
        family_params(5, 2, Fraction(5)), depth=8,
        rng=random.Random(55), shift_samples=100,
    )
    assert rep.symbol_count == 2
    assert rep.disk_residues == (2, 3)
    assert rep.incidence == ((1, 1), (1, 1))
    assert rep.all_cylinders_realized and rep.realized_word_count == 2**8
    assert rep.shift_checks == 100
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"criterion 5 took {elapsed:.1f}s (budget 30s)"
    _announce(5, "full shift on 2 symbols at depth 8 with shift-equivariant coding", started)


def test_criterion_06_convergence_divergence_large_a():
    started = time.monotonic()
    params = family_params(3, 3, Fraction(1, 9))
    x0 = family_fixed_points(3, 3, Fraction(1, 9), precision=70)[0]
    assert x0.norm() == PPow(3, -2)  # |x0| = 1/9
    rng = random.Random(1406)
    for _ in range(100):
        x = random_rational_with_valuation(rng, 3, rng.randrange(0, 5))  # inside Z_3
        res = orbit(params, x, max_iter=60, precision=40, targets=[x0])
        assert res.verdict == "ConvergesTo" and res.steps <= 60
        trace = res.distance_trace
        assert all(b >= a for a, b in zip(trace, trace[1:])), "distances not monotone"
    for _ in range(100):
        x = random_rational_with_valuation(rng, 3, -rng.randrange(2, 6))  # |x| >= 9
        res = orbit(params, x, max_iter=60, precision=40)
        assert res.verdict == "DivergesToInfinity"
        assert "monoton" in res.certificate
    _announce(6, "convergence to the small fixed point and certified divergence", started)


DSY3_PAIRS = {
    1: {"sat": [(1, 6), (4, 12)], "viol": [(4, 2), (1, 4)]},
    2: {"sat": [(1, 4), (10, 16)], "viol": [(1, 2), (4, 4)]},
    3: {"sat": [(4, 2), (13, 8)], "viol": [(7, 2), (1, 2)]},
    4: {"sat": [(4, 10), (13, 16)], "viol": [(4, 4), (1, 10)]},
    5: {"sat": [(7, 4), (16, 10)], "viol": [(7, 2), (1, 4)]},
    6: {"sat": [(7, 2), (16, 8)], "viol": [(25, 2), (7, 8)]},
}


def test_criterion_07_mod3_catalog_concordance():
    started = time.monotonic()
    for item, pairs in DSY3_PAIRS.items():
        for kind in ("sat", "viol"):
            for a, N in pairs[kind]:
                pred = mod3_component_prediction(a, N)
                applies = pred.item == item
                assert applies == (kind == "sat"), (item, a, N, pred.item)
                f = family_polynomial(family_params(3, N, Fraction(a)))
                for claim in pred.claims:
                    observed = all(is_minimal_to_depth(f, s, 5) for s in claim.sets)
                    assert observed == claim.predicted_minimal, (
                        item, a, N, claim.label, observed, claim.predicted_minimal)
                if item == 1 and kind == "sat":
                    rec = classify_cycle(f, (2,), 1)
                    assert rec.cycle_class is CycleClass.GROWS_TAILS
    # the two canonical instances called out explicitly
    f42 = family_polynomial(family_params(3, 2, Fraction(4)))
    assert is_minimal_to_depth(f42, ResidueSet.single_class(3, 2, 1), 5)
    f72 = family_polynomial(family_params(3, 2, Fraction(7)))
    for c in (2, 5, 8):
        assert is_minimal_to_depth(f72, ResidueSet.single_class(3, c, 2), 5)
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"criterion 7 took {elapsed:.1f}s (budget 60s)"
    _announce(7, "mod-3 component catalog concordance (6 items, sat+viol pairs)", started)


def test_criterion_08_two_adic_attracting_orbit():
    started = time.monotonic()
    for a in (1, 3, 5):
        for N in (2, 3, 4, 5):
            f = family_polynomial(family_params(2, N, Fraction(a)))
            level1 = build_level_map(f, ResidueSet.all_of_zp(2), 1)
            recs, _ = cycles_at_level(level1)
            assert len(recs) == 1 and recs[0].cycle_class is CycleClass.GROWS_TAILS
            basin = grows_tails_basin(f, recs[0], precision=40, samples=50,
                                      rng=random.Random(1408))
            x0 = basin.residue_orbit[0]
            assert f.iterate_mod(x0, 2, 40, derivatives=0)[0] == x0  # f**2 fixes x0 mod 2**40
            assert basin.samples_checked == 50
            assert recs[0].ball_set().spec_string() == "all"  # basin is all of Z_2
    _announce(8, "2-adic attracting 2-periodic orbits (12 parameter pairs, 50 samples each)", started)


def test_criterion_09_sphere_minimality_engine():
    started = time.monotonic()
    rep = sphere_minimality_report(family_params(5, 5, Fraction(2, 625)))
    assert rep.cond1["holds"] is True
    assert rep.cond1["orbit_route"]["holds"] is True
    assert rep.cond1["arithmetic_route"]["holds"] is True

    rep2 = sphere_minimality_report(family_params(5, 2, Fraction(1, 5)))
    assert rep2.cond1["holds"] is False
    g2 = build_sphere_polynomial(family_params(5, 2, Fraction(1, 5)))
    level1 = build_level_map(g2, ResidueSet.unit_sphere(5), 1)
    raw, tails = cycles_at_level(level1)
    assert tails or len(raw) > 1 or raw[0].length < 4  # level-1 minimality failure

    # p = 2: always non-minimal; five valid parameter sets that reach the
    # level-2 split check (level-1 grows, then beta_2 = 0 forces a split).
    two_adic_cases = [(3, Fraction(3, 4)), (3, Fraction(7, 4)), (3, Fraction(11, 4)),
                      (5, Fraction(3, 16)), (3, Fraction(15, 4))]
    for N, a in two_adic_cases:
        rep_p2 = sphere_minimality_report(family_params(2, N, a))
        assert rep_p2.minimal is False
        assert rep_p2.p2_evidence["level1_class"] == "grows"
        assert rep_p2.p2_evidence["level2_class"] == "splits"
        assert rep_p2.p2_evidence["level2_beta_mod_2"] == 0
    _announce(9, "sphere minimality conditions (both routes; p=2 split evidence)", started)


def test_criterion_10_hensel_battery():
    started = time.monotonic()
    rng = random.Random(1410)
    lifted = 0
    scanned = 0
    while lifted < 100:
        p = rng.choice((2, 3, 5, 7, 11))
        deg = rng.randrange(2, 6)
        coeffs = [rng.randrange(-30, 31) for _ in range(deg)] + [rng.randrange(1, 15)]
        x0 = rng.randrange(p)
        F = PadicPolynomial.make(p, coeffs)
        shift = F.eval_exact(x0) % p
        coeffs[0] -= int(shift)
        F = PadicPolynomial.make(p, coeffs)
        rep = hensel_report(F, x0, L=None, s=1)
        if not rep.passes:
            continue
        root = hensel_lift(F, x0, 60, report=rep)
        assert F.eval_mod(root.residue(60), 60) == 0
        assert rep.locating_ball().contains(root)
        lifted += 1
        if scanned < 20:
            assert unique_seed_scan(F, rep) == 1
            scanned += 1
    assert lifted == 100 and scanned == 20
    _announce(10, "root lifting battery (100 certified seeds to p**60; 20 uniqueness scans)", started)


def test_criterion_11_lift_pattern_self_consistency():
    started = time.monotonic()
    checked = 0
    systems = []
    # systems underlying criteria 6-9 (integral-coefficient conjugates)
    systems.append((build_sphere_polynomial(family_params(3, 3, Fraction(1, 9))),
                    ResidueSet.unit_sphere(3), 5))
    for item_pairs in DSY3_PAIRS.values():
        for a, N in item_pairs["sat"]:
            systems.append((family_polynomial(family_params(3, N, Fraction(a))),
                            ResidueSet.all_of_zp(3), 5))
    for a in (1, 3, 5):
        for N in (2, 3):
            systems.append((family_polynomial(family_params(2, N, Fraction(a))),
                            ResidueSet.all_of_zp(2), 6))
    systems.append((build_sphere_polynomial(family_params(5, 5, Fraction(2, 625))),
                    ResidueSet.unit_sphere(5), 4))
    systems.append((build_sphere_polynomial(family_params(5, 2, Fraction(1, 5))),
                    ResidueSet.unit_sphere(5), 4))
    systems.append((build_sphere_polynomial(family_params(2, 3, Fraction(3, 4))),
                    ResidueSet.unit_sphere(2), 6))
    for f, domain, depth in systems:
        checked += validate_lift_tree(f, domain, depth)  # raises on any violation
    assert checked > 100
    _announce(11, f"lift patterns and growth stability hold across {checked} validated lifts", started)
