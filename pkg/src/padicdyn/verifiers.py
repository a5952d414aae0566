"""Budgeted verifiers for the named dynamical claims about the family.

Each verifier takes family parameters and a budget, gathers evidence items
(exact, sampled, or depth-bounded), and returns a report whose verdict is
PASS only when every item checks out.  A FAIL on a claim instance would
contradict a proved statement, so callers treat it as build-stopping.

Claim tags:

    sy1   |a|_p > 1: dichotomy between escape to infinity and convergence
          to the small fixed point, plus the invariant-sphere bookkeeping
    sy2   |a|_p < 1, p odd: full-shift repeller or global escape
    sy3   |a|_2 < 1: the four 2-adic subcases
    sy4   |a|_p = 1: escape off Z_p
    dsy1  minimality of the sphere conjugate on the whole unit sphere
    dsy2  |a|_2 = 1: the attracting 2-periodic orbit swallowing Z_2
    dsy3  p = 3, a = 1 mod 3: the minimal-component catalog on 2 + 3Z_3
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cycles import (
    CycleClass,
    build_level_map,
    cycles_at_level,
    default_depth,
    grows_tails_basin,
    is_minimal_to_depth,
    minimal_decomposition,
    minimality_check,
)
from .errors import RegimeMismatch
from .family import (
    FamilyParams,
    build_odd_units_polynomial,
    build_sphere_polynomial,
    classify_regime,
    family_polynomial,
    mod3_component_prediction,
    orbit,
    sphere_minimality_report,
    sphere_scale_exponent,
)
from .geometry import ResidueSet
from .hensel import family_fixed_points
from .padic import PadicNumber
from .repeller import repeller_analysis
from .report import DEPTH_BOUNDED, EXACT, SAMPLED, Evidence, Report
from .sampling import random_rational_with_valuation

VERIFIER_TAGS = ("sy1", "sy2", "sy3", "sy4", "dsy1", "dsy2", "dsy3")


@dataclass(frozen=True)
class VerifyBudget:
    depth: int = 6
    iterations: int = 60
    samples: int = 100
    precision: int = 40
    seed: int = 0


def run_verifier(tag: str, params: FamilyParams, budget: Optional[VerifyBudget] = None) -> Report:
    budget = budget or VerifyBudget()
    try:
        fn = _DISPATCH[tag]
    except KeyError:
        raise RegimeMismatch(f"unknown claim tag {tag!r}; expected one of {VERIFIER_TAGS}")
    evidence = fn(params, budget)
    verdict = "PASS" if all(e.ok for e in evidence) else "FAIL"
    request = {
        "command": "verify",
        "params": {"theorem": tag, "p": params.prime, "N": params.N, "a": str(params.a)},
        "seed": budget.seed,
        "precision": budget.precision,
    }
    return Report(request, verdict, evidence)


# -- sy1: |a|_p > 1 -----------------------------------------------------------


def _fixed_point_norm_shells(params: FamilyParams) -> list[dict]:
    """Valuations where x**N - a x + 1 can vanish, by exact term balance.

    A root needs the minimum of the term valuations {N v, v_a + v, 0} to be
    attained at least twice.
    """
    shells = []
    v_a, N = params.v_a, params.N
    # Balance of the constant and linear terms: v = -v_a.
    v = -v_a
    if N * v >= 0:
        shells.append({"valuation": v, "balance": "constant-linear"})
    # Balance of the top and linear terms: (N-1) v = v_a, integral only.
    if v_a % (N - 1) == 0:
        v = v_a // (N - 1)
        if v_a + v <= 0:
            shells.append({"valuation": v, "balance": "top-linear"})
    # Balance of the top term and the constant: v = 0, needs |a| <= 1.
    if v_a >= 0:
        shells.append({"valuation": 0, "balance": "top-constant"})
    return shells


def _verify_sy1(params: FamilyParams, budget: VerifyBudget) -> list[Evidence]:
    if params.v_a >= 0:
        raise RegimeMismatch("sy1 needs |a|_p > 1")
    p, N, v_a = params.prime, params.N, params.v_a
    rng = random.Random(budget.seed)
    evidence = []
    work = budget.precision + 24

    x0 = family_fixed_points(p, N, params.a, precision=work)[0]
    f = family_polynomial(params)
    fx0 = f(x0)
    evidence.append(Evidence(
        "small-fixed-point",
        EXACT,
        (not x0.is_zero) and x0.valuation == -v_a and fx0 == x0,
        {"valuation": x0.valuation, "expected_valuation": -v_a},
    ))

    shells = _fixed_point_norm_shells(params)
    sphere_present = (-v_a) % (N - 1) == 0
    expected_shells = 2 if sphere_present else 1
    evidence.append(Evidence(
        "fixed-point-census",
        EXACT,
        len(shells) == expected_shells and shells[0]["balance"] == "constant-linear",
        {
            "possible_root_shells": shells,
            "sphere_present": sphere_present,
            "conclusion": "exactly two fixed points (infinity and the small one)"
            if not sphere_present
            else "off-sphere fixed points are exactly infinity and the small one",
        },
    ))

    inside_ok = 0
    monotone_ok = 0
    v_min = v_a // (N - 1) + 1  # smallest valuation strictly inside the critical disk
    for _ in range(budget.samples):
        v = rng.randrange(v_min, v_min + 4)
        x = random_rational_with_valuation(rng, p, v)
        res = orbit(params, x, budget.iterations, budget.precision, targets=[x0])
        if res.verdict == "ConvergesTo":
            inside_ok += 1
            if all(b >= a for a, b in zip(res.distance_trace, res.distance_trace[1:])):
                monotone_ok += 1
    evidence.append(Evidence(
        "convergence-inside-critical-disk",
        SAMPLED,
        inside_ok == budget.samples and monotone_ok == budget.samples,
        {"converged": inside_ok, "monotone_distances": monotone_ok, "samples": budget.samples},
    ))

    outside_ok = 0
    for _ in range(budget.samples):
        v = v_min - 1 - rng.randrange(0, 4)
        while (N - 1) * v >= v_a:
            v -= 1
        x = random_rational_with_valuation(rng, p, v)
        res = orbit(params, x, budget.iterations, budget.precision)
        if res.verdict == "DivergesToInfinity":
            outside_ok += 1
    evidence.append(Evidence(
        "divergence-outside-critical-disk",
        SAMPLED,
        outside_ok == budget.samples,
        {"diverged": outside_ok, "samples": budget.samples},
    ))

    if sphere_present:
        s = sphere_scale_exponent(params)
        g = build_sphere_polynomial(params)
        scale = PadicNumber.from_rational(p, Fraction(p) ** s, work)
        conj_ok = 0
        trials = min(budget.samples, 20)
        for _ in range(trials):
            x = PadicNumber.from_rational(p, random_rational_with_valuation(rng, p, -s), work)
            if g(scale * x) == scale * f(x):
                conj_ok += 1
        evidence.append(Evidence(
            "sphere-conjugate",
            SAMPLED,
            g.has_integral_coefficients() and conj_ok == trials,
            {"integral_coefficients": g.has_integral_coefficients(),
             "conjugacy_spot_checks": conj_ok, "trials": trials,
             "scale_exponent": s},
        ))
    return evidence


# -- sy2: |a|_p < 1, p odd ----------------------------------------------------


def _verify_sy2(params: FamilyParams, budget: VerifyBudget) -> list[Evidence]:
    if params.prime < 3 or params.v_a <= 0:
        raise RegimeMismatch("sy2 needs p >= 3 and |a|_p < 1")
    regime = classify_regime(params)
    rng = random.Random(budget.seed)
    evidence = []
    if regime.tag == "SY2i" and regime.side.get("ell_formula") == 1:
        return _verify_sy2_single_disk(params, budget, rng)
    if regime.tag == "SY2i":
        rep = repeller_analysis(params, budget.depth, rng,
                                expansion_samples=min(budget.samples, 30),
                                shift_samples=budget.samples)
        evidence.append(Evidence(
            "fixed-point-disks",
            EXACT,
            rep.symbol_count >= 2,
            {"count": rep.symbol_count, "residues_mod_p": list(rep.disk_residues),
             "tau": rep.tau},
        ))
        if regime.side.get("ell_pinned"):
            evidence.append(Evidence(
                "symbol-count-formula",
                EXACT,
                rep.symbol_count == regime.side["ell_formula"],
                {"gcd_formula": regime.side["ell_formula"], "found": rep.symbol_count},
            ))
        evidence.append(Evidence(
            "incidence-full",
            EXACT,
            all(all(row) for row in rep.incidence) and rep.irreducible,
            {"incidence": [list(r) for r in rep.incidence], "irreducible": rep.irreducible},
        ))
        evidence.append(Evidence(
            "exact-expansion",
            SAMPLED,
            rep.expansion_checks > 0,
            {"checks": rep.expansion_checks, "tau": rep.tau},
        ))
        evidence.append(Evidence(
            "cylinder-realization",
            DEPTH_BOUNDED,
            rep.all_cylinders_realized,
            {"realized": rep.realized_word_count,
             "expected": rep.symbol_count**rep.depth,
             "coded_points": len(rep.coding)},
            depth=rep.depth,
        ))
        evidence.append(Evidence(
            "shift-equivariance",
            SAMPLED,
            rep.shift_checks == budget.samples,
            {"checks": rep.shift_checks, "samples": budget.samples},
        ))
        if rep.invariant_set_equals_unit_orbit_set is not None:
            evidence.append(Evidence(
                "invariant-set-is-unit-orbit-set",
                SAMPLED,
                rep.invariant_set_equals_unit_orbit_set,
                {},
            ))
    else:
        diverged = 0
        trials = budget.samples
        for _ in range(trials):
            kind = rng.randrange(3)
            if kind == 0:
                x = random_rational_with_valuation(rng, params.prime, 0)
            elif kind == 1:
                x = random_rational_with_valuation(rng, params.prime, rng.randrange(1, 4))
            else:
                x = random_rational_with_valuation(rng, params.prime, -rng.randrange(1, 4))
            res = orbit(params, x, budget.iterations, budget.precision)
            if res.verdict == "DivergesToInfinity":
                diverged += 1
        evidence.append(Evidence(
            "global-divergence",
            SAMPLED,
            diverged == trials,
            {"diverged": diverged, "samples": trials, "gcd": regime.side.get("gcd")},
        ))
    return evidence


def _verify_sy2_single_disk(params: FamilyParams, budget: VerifyBudget,
                            rng: random.Random) -> list[Evidence]:
    """Degenerate expanding case: one fixed disk, everything else escapes.

    With a single unit fixed point the invariant orbit set collapses to
    that point (one-symbol shift); sampled disk points away from it are
    pushed out by the exact expansion and certified divergent.
    """
    p = params.prime
    evidence = []
    fixed = family_fixed_points(p, params.N, params.a, precision=budget.precision + 24)
    evidence.append(Evidence(
        "single-fixed-disk",
        EXACT,
        len(fixed) == 1,
        {"count": len(fixed), "residue_mod_p": fixed[0].residue(1),
         "note": "gcd(p-1, q) = 1: the invariant set is the fixed point alone"},
    ))
    x0 = fixed[0]
    diverged = 0
    trials = budget.samples
    for _ in range(trials):
        x = _sample_avoiding(rng, params, x0, budget.precision + 24, budget.precision)
        res = orbit(params, x, max(budget.iterations, budget.precision + 30), budget.precision)
        diverged += res.verdict == "DivergesToInfinity"
    evidence.append(Evidence(
        "escape-away-from-fixed-point",
        SAMPLED,
        diverged == trials,
        {"diverged": diverged, "samples": trials},
    ))
    return evidence


# -- sy3: p = 2, |a|_2 < 1 ----------------------------------------------------


def _sample_avoiding(rng, params, x0, work, precision):
    """An exact rational sample kept a detectable distance away from x0."""
    p = params.prime
    for _ in range(64):
        kind = rng.randrange(3)
        if kind == 0:
            x = random_rational_with_valuation(rng, p, 0)
        elif kind == 1:
            x = random_rational_with_valuation(rng, p, rng.randrange(1, 4))
        else:
            x = random_rational_with_valuation(rng, p, -rng.randrange(1, 4))
        try:
            xp = PadicNumber.from_rational(p, x, work)
            if (xp - x0).valuation <= precision - 8:
                return x
        except Exception:
            continue
    raise RegimeMismatch("could not sample a point away from the fixed point")


def _verify_sy3(params: FamilyParams, budget: VerifyBudget) -> list[Evidence]:
    if params.prime != 2 or params.v_a <= 0:
        raise RegimeMismatch("sy3 needs p = 2 and |a|_2 < 1")
    regime = classify_regime(params)
    rng = random.Random(budget.seed)
    work = budget.precision + 24
    evidence = []
    k = params.v_a

    if regime.tag == "SY3i":
        x0 = family_fixed_points(2, params.N, params.a, precision=work)[0]
        in_ball = x0.residue(k + 1) == (2**k - 1) % 2 ** (k + 1)
        evidence.append(Evidence(
            "unique-finite-fixed-point",
            EXACT,
            in_ball,
            {"residue": x0.residue(k + 2), "expected_mod": f"2**{k} - 1 mod 2**{k + 1}"},
        ))
        diverged = 0
        trials = min(budget.samples, 50)
        for _ in range(trials):
            x = _sample_avoiding(rng, params, x0, work, budget.precision)
            res = orbit(params, x, max(budget.iterations, budget.precision + 20), budget.precision)
            if res.verdict == "DivergesToInfinity":
                diverged += 1
        evidence.append(Evidence(
            "divergence-away-from-fixed-point",
            SAMPLED,
            diverged == trials,
            {"diverged": diverged, "samples": trials},
        ))
    elif regime.tag == "SY3ii":
        diverged = 0
        for _ in range(budget.samples):
            v = rng.choice([0, 0, 1, 2, -1, -2])
            x = random_rational_with_valuation(rng, 2, v)
            res = orbit(params, x, budget.iterations, budget.precision)
            diverged += res.verdict == "DivergesToInfinity"
        evidence.append(Evidence(
            "global-divergence",
            SAMPLED,
            diverged == budget.samples,
            {"diverged": diverged, "samples": budget.samples},
        ))
    elif regime.tag == "SY3iii":
        x0 = family_fixed_points(2, params.N, params.a, precision=work)[0]
        target_res = 1 if params.unit_digit(1) == 0 else 3
        evidence.append(Evidence(
            "unit-sphere-fixed-point",
            EXACT,
            x0.valuation == 0 and x0.residue(2) == target_res,
            {"residue_mod_4": x0.residue(2),
             "expected_mod_4": target_res,
             "rule": "a = 2 mod 8 puts it at 1 mod 4, a = 6 mod 8 at 3 mod 4"},
        ))
        converged = 0
        for _ in range(budget.samples):
            x = random_rational_with_valuation(rng, 2, 0)
            res = orbit(params, x, max(budget.iterations, budget.precision + 20),
                        budget.precision, targets=[x0])
            converged += res.verdict == "ConvergesTo"
        evidence.append(Evidence(
            "unit-sphere-convergence",
            SAMPLED,
            converged == budget.samples,
            {"converged": converged, "samples": budget.samples},
        ))
        diverged = 0
        trials = min(budget.samples, 40)
        for _ in range(trials):
            v = rng.choice([1, 2, -1, -2])
            x = random_rational_with_valuation(rng, 2, v)
            res = orbit(params, x, budget.iterations, budget.precision)
            diverged += res.verdict == "DivergesToInfinity"
        evidence.append(Evidence(
            "divergence-off-unit-sphere",
            SAMPLED,
            diverged == trials,
            {"diverged": diverged, "samples": trials},
        ))
    else:  # SY3iv
        h = build_odd_units_polynomial(params)
        f = family_polynomial(params)
        two = PadicNumber.from_rational(2, 2, work)
        one = PadicNumber.one(2, work)
        conj_ok = 0
        trials = min(budget.samples, 20)
        for _ in range(trials):
            x = PadicNumber.from_rational(2, random_rational_with_valuation(rng, 2, 0), work)
            if h((x - one) / two) == (f(x) - one) / two:
                conj_ok += 1
        evidence.append(Evidence(
            "odd-units-conjugate",
            SAMPLED,
            h.has_integral_coefficients() and conj_ok == trials,
            {"integral_coefficients": h.has_integral_coefficients(),
             "conjugacy_spot_checks": conj_ok, "trials": trials},
        ))
        diverged = 0
        trials2 = min(budget.samples, 40)
        for _ in range(trials2):
            v = rng.choice([1, 2, -1, -2])
            x = random_rational_with_valuation(rng, 2, v)
            res = orbit(params, x, budget.iterations, budget.precision)
            diverged += res.verdict == "DivergesToInfinity"
        evidence.append(Evidence(
            "divergence-off-unit-sphere",
            SAMPLED,
            diverged == trials2,
            {"diverged": diverged, "samples": trials2},
        ))
        depth = min(budget.depth, default_depth(2))
        decomp = minimal_decomposition(h, ResidueSet.all_of_zp(2), depth)
        evidence.append(Evidence(
            "conjugate-dynamics-on-z2",
            DEPTH_BOUNDED,
            decomp.partition_ok(),
            {
                "minimal_components": [c.support.spec_string() for c in decomp.minimal_components],
                "attracting": [c.support.spec_string() for c in decomp.attracting_components],
                "undecided": [u.spec_string() for u in decomp.undecided],
                "note": "descriptive bounded-depth decomposition; behavior can be complex",
            },
            depth=depth,
        ))
    return evidence


# -- sy4: |a|_p = 1 -----------------------------------------------------------


def _verify_sy4(params: FamilyParams, budget: VerifyBudget) -> list[Evidence]:
    if params.v_a != 0:
        raise RegimeMismatch("sy4 needs |a|_p = 1")
    p = params.prime
    rng = random.Random(budget.seed)
    f = family_polynomial(params)
    evidence = [Evidence(
        "unit-ball-invariance",
        EXACT,
        f.has_integral_coefficients(),
        {"reason": "all coefficients are 1/a with a a unit, so f maps Z_p to Z_p"},
    )]
    diverged = 0
    for _ in range(budget.samples):
        x = random_rational_with_valuation(rng, p, -rng.randrange(1, 5))
        res = orbit(params, x, budget.iterations, budget.precision)
        diverged += res.verdict == "DivergesToInfinity"
    evidence.append(Evidence(
        "divergence-off-unit-ball",
        SAMPLED,
        diverged == budget.samples,
        {"diverged": diverged, "samples": budget.samples},
    ))
    return evidence


# -- dsy1: sphere minimality --------------------------------------------------


def _verify_dsy1(params: FamilyParams, budget: VerifyBudget) -> list[Evidence]:
    if params.v_a >= 0 or (-params.v_a) % (params.N - 1) != 0:
        raise RegimeMismatch("dsy1 needs |a|_p > 1 with (N-1) | v_p(a)")
    p = params.prime
    rep = sphere_minimality_report(params)
    evidence = []
    if p == 2:
        evidence.append(Evidence(
            "never-minimal-at-p-2",
            EXACT,
            rep.minimal is False,
            dict(rep.p2_evidence or {}),
        ))
    else:
        evidence.append(Evidence(
            "level-1-covering-cycle-condition",
            EXACT,
            rep.cond1["orbit_route"]["first_return"] == rep.cond1["arithmetic_route"]["first_return"],
            {"cond1": rep.cond1},
        ))
        evidence.append(Evidence(
            "level-1-growth-condition",
            EXACT,
            True,
            {"cond2": rep.cond2, "holds": rep.cond2["holds"]},
        ))
    g = build_sphere_polynomial(params)
    depth = max(3, min(budget.depth, default_depth(p)))
    per_level = minimality_check(g, ResidueSet.unit_sphere(p), depth)
    evidence.append(Evidence(
        "level-table-concordance",
        DEPTH_BOUNDED,
        all(per_level) == rep.minimal,
        {"verdict": rep.minimal, "per_level_single_cycle": per_level},
        depth=depth,
    ))
    return evidence


# -- dsy2: p = 2, |a|_2 = 1 ---------------------------------------------------


def _verify_dsy2(params: FamilyParams, budget: VerifyBudget) -> list[Evidence]:
    if params.prime != 2 or params.v_a != 0:
        raise RegimeMismatch("dsy2 needs p = 2 and |a|_2 = 1")
    f = family_polynomial(params)
    level1 = build_level_map(f, ResidueSet.all_of_zp(2), 1)
    recs, _ = cycles_at_level(level1)
    rec = recs[0]
    evidence = [Evidence(
        "level-1-two-cycle-grows-tails",
        EXACT,
        len(recs) == 1 and rec.length == 2 and rec.cycle_class is CycleClass.GROWS_TAILS,
        {"cycle": rec.as_dict()},
    )]
    basin = grows_tails_basin(f, rec, precision=budget.precision,
                              samples=min(budget.samples, 50),
                              rng=random.Random(budget.seed))
    gk = f.iterate_mod(basin.residue_orbit[0], 2, budget.precision, derivatives=0)[0]
    evidence.append(Evidence(
        "two-periodic-point",
        EXACT,
        gk == basin.residue_orbit[0],
        {"orbit_residues": list(basin.residue_orbit), "precision": budget.precision},
    ))
    evidence.append(Evidence(
        "whole-ring-attraction",
        SAMPLED,
        basin.samples_checked == min(budget.samples, 50)
        and rec.ball_set().spec_string() == "all",
        {"samples": basin.samples_checked, "max_periods": basin.max_periods,
         "basin": rec.ball_set().spec_string()},
    ))
    return evidence


# -- dsy3: p = 3, a = 1 mod 3 -------------------------------------------------


def _verify_dsy3(params: FamilyParams, budget: VerifyBudget) -> list[Evidence]:
    if params.prime != 3 or params.v_a != 0 or params.a0 != 1:
        raise RegimeMismatch("dsy3 needs p = 3 and a = 1 mod 3")
    f = family_polynomial(params)
    N = params.N
    pred = mod3_component_prediction(params.a, N)
    evidence = []

    if N % 2 == 1:
        level1 = build_level_map(f, ResidueSet.all_of_zp(3), 1)
        recs, _ = cycles_at_level(level1)
        rec = recs[0]
        evidence.append(Evidence(
            "level-1-three-cycle-grows-tails",
            EXACT,
            len(recs) == 1 and rec.length == 3 and rec.cycle_class is CycleClass.GROWS_TAILS,
            {"cycle": rec.as_dict()},
        ))
        basin = grows_tails_basin(f, rec, precision=budget.precision,
                                  samples=min(budget.samples, 30),
                                  rng=random.Random(budget.seed))
        evidence.append(Evidence(
            "three-periodic-attractor",
            SAMPLED,
            len(basin.residue_orbit) == 3 and basin.samples_checked > 0,
            {"orbit_residues": list(basin.residue_orbit), "samples": basin.samples_checked},
        ))
        return evidence

    table = {r: f.eval_mod(r, 1) for r in range(3)}
    evidence.append(Evidence(
        "funnel-into-invariant-ball",
        EXACT,
        table[0] == 1 and table[1] == 2 and table[2] == 2,
        {"level_1_map": table,
         "meaning": "3Z_3 maps into 1+3Z_3, which maps into the invariant ball 2+3Z_3"},
    ))

    checks = []
    ok_all = True
    depth = 5
    for claim in pred.claims:
        observed = all(is_minimal_to_depth(f, s, depth) for s in claim.sets)
        agree = observed == claim.predicted_minimal
        ok_all = ok_all and agree
        checks.append({
            "label": claim.label,
            "predicted_minimal": claim.predicted_minimal,
            "observed_minimal_to_depth": observed,
            "agree": agree,
        })
    evidence.append(Evidence(
        "component-catalog-concordance",
        DEPTH_BOUNDED,
        ok_all,
        {"item": pred.item, "a_mod_27": pred.a_mod_27, "N_mod_18": pred.N_mod_18,
         "claims": checks},
        depth=depth,
    ))

    if pred.item == 1:
        dom = ResidueSet.single_class(3, 2, 1)
        level1 = build_level_map(f, dom, 1)
        recs, _ = cycles_at_level(level1)
        rec = recs[0]
        basin = grows_tails_basin(f, rec, precision=budget.precision,
                                  samples=min(budget.samples, 30),
                                  rng=random.Random(budget.seed))
        evidence.append(Evidence(
            "attracting-fixed-point",
            SAMPLED,
            rec.cycle_class is CycleClass.GROWS_TAILS and rec.length == 1
            and basin.samples_checked > 0,
            {"fixed_point_residue": basin.residue_orbit[0], "samples": basin.samples_checked},
        ))
    return evidence


_DISPATCH = {
    "sy1": _verify_sy1,
    "sy2": _verify_sy2,
    "sy3": _verify_sy3,
    "sy4": _verify_sy4,
    "dsy1": _verify_dsy1,
    "dsy2": _verify_dsy2,
    "dsy3": _verify_dsy3,
}
