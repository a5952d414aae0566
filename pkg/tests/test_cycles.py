"""Level maps, cycle classification, lifts, minimality, decomposition."""

import random
from fractions import Fraction

import pytest

from padicdyn.cycles import (
    CycleClass,
    CycleRecord,
    _validate_lift_pattern,
    build_level_map,
    classify_cycle,
    cycles_at_level,
    functional_graph_cycles,
    grows_tails_basin,
    lift_cycles,
    minimal_decomposition,
    minimality_check,
    validate_lift_tree,
)
from padicdyn.errors import (
    DomainNotInvariant,
    InternalInconsistency,
    NotACycle,
    SizeGuard,
)
from padicdyn.geometry import ResidueSet
from padicdyn.polynomials import PadicPolynomial


def quad_over(a, p=3):
    """(x**2 + 1)/a over Q_p."""
    return PadicPolynomial.make(p, [Fraction(1, a), 0, Fraction(1, a)])


def family(p, N, a):
    return PadicPolynomial.make(p, [Fraction(1, a)] + [0] * (N - 1) + [Fraction(1, a)])


def test_level_map_example_mod_9():
    # Oracle: 4**-1 = 7 mod 9; f(2)=5*7=35=8, f(8)=65*7=455=5, f(5)=26*7=182=2.
    m = build_level_map(quad_over(4), ResidueSet.single_class(3, 2, 1), 2)
    assert m.table == {2: 8, 8: 5, 5: 2}


def test_level_map_identity():
    ident = PadicPolynomial.make(5, [0, 1])
    m = build_level_map(ident, ResidueSet.all_of_zp(5), 2)
    assert all(m.table[r] == r for r in m.residues)
    recs, tails = cycles_at_level(m)
    assert len(recs) == 25 and not tails


def test_level_map_x2_plus_1_at_2():
    m = build_level_map(PadicPolynomial.make(2, [1, 0, 1]), ResidueSet.all_of_zp(2), 1)
    assert m.table == {0: 1, 1: 0}


def test_level_map_rejects_non_invariant_domain():
    f = PadicPolynomial.make(3, [1, 0, 1])  # x**2 + 1 sends 0 -> 1
    with pytest.raises(DomainNotInvariant):
        build_level_map(f, ResidueSet.single_class(3, 0, 1), 1)


def test_level_map_size_guard():
    f = PadicPolynomial.make(2, [0, 1])
    with pytest.raises(SizeGuard):
        build_level_map(f, ResidueSet.all_of_zp(2), 30)


def test_functional_graph_tails():
    table = {0: 1, 1: 2, 2: 2, 3: 1}
    cycles, tails = functional_graph_cycles(table)
    assert cycles == [[2]]
    assert tails[1] == (0, 1) and tails[0] == (0, 2) and tails[3] == (0, 2)


def test_functional_graph_randomized_against_orbit_walk():
    # Oracle: follow each node until repetition; the repeated suffix is its
    # cycle and the prefix length its tail distance.
    rng = random.Random(77)
    for _ in range(60):
        n = rng.randrange(1, 40)
        table = {i: rng.randrange(n) for i in range(n)}
        cycles, tails = functional_graph_cycles(table)
        cycle_nodes = {x for c in cycles for x in c}
        for start in range(n):
            seen = {}
            x = start
            steps = 0
            while x not in seen:
                seen[x] = steps
                x = table[x]
                steps += 1
            tail_len = seen[x]
            if tail_len == 0 and start in cycle_nodes:
                assert start not in tails
            else:
                expected = seen[x] if start not in cycle_nodes else 0
                if start not in cycle_nodes:
                    assert tails[start][1] == expected


def test_classification_grows_example():
    # alpha_1 = 2*2/4 = 1, beta_1 = (5/4 - 2)/3 = -1/4 = 2 mod 3 -> grows.
    rec = classify_cycle(quad_over(4), (2,), 1)
    assert rec.cycle_class is CycleClass.GROWS
    assert rec.alpha_mod_p == 1 and rec.beta_mod_p == 2


def test_classification_grows_tails_when_p_divides_N():
    # N = 6, a = 1 mod 3: alpha_1(2) = 6*2**5/a = 0 mod 3.
    rec = classify_cycle(family(3, 6, 1), (2,), 1)
    assert rec.cycle_class is CycleClass.GROWS_TAILS


def test_classification_splits_example():
    # a = 7 = 7 mod 9: beta_1(2) = (5/7 - 2)/3 = -3/7 vanishes mod 3.
    rec = classify_cycle(quad_over(7), (2,), 1)
    assert rec.cycle_class is CycleClass.SPLITS
    assert rec.alpha_mod_p == 1 and rec.beta_mod_p == 0


def test_classification_partial_split():
    # N = 4, a = 1: alpha_1(2) = 4*8 = 32 = 2 mod 3 -> partially splits, d = 2.
    rec = classify_cycle(family(3, 4, 1), (2,), 1)
    assert rec.cycle_class is CycleClass.PARTIALLY_SPLITS
    assert rec.alpha_mod_p == 2


def test_classify_rejects_non_cycle():
    with pytest.raises(NotACycle):
        classify_cycle(quad_over(4), (2, 5), 1)


def test_classification_precision_robustness():
    rng = random.Random(17)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        coeffs = [rng.randrange(0, p**3) for _ in range(rng.randrange(2, 5))]
        f = PadicPolynomial.make(p, coeffs + [1])
        m = build_level_map(f, ResidueSet.all_of_zp(p), 1)
        recs, _ = cycles_at_level(m)
        for rec in recs:
            again = classify_cycle(f, rec.elements, 1, headroom=16 + rec.level)
            assert again.cycle_class is rec.cycle_class
            assert again.alpha_mod_p == rec.alpha_mod_p
            assert again.beta_mod_p == rec.beta_mod_p


def test_lift_growing_cycle_becomes_level2_triple():
    rec = classify_cycle(quad_over(4), (2,), 1)
    children, tails = lift_cycles(quad_over(4), rec)
    assert not tails and len(children) == 1
    assert children[0].elements == (2, 8, 5)


def test_lift_grows_tails_single_lift():
    f = PadicPolynomial.make(2, [1, 0, 1])
    rec = classify_cycle(f, (0, 1), 1)
    assert rec.cycle_class is CycleClass.GROWS_TAILS
    children, tails = lift_cycles(f, rec)
    assert len(children) == 1 and children[0].cycle_class is CycleClass.GROWS_TAILS
    assert children[0].length == 2 and len(tails) == 2


def test_lift_partial_split_lengths():
    # d = 2: one fixed lift stays partial, one 2-cycle appears.
    f = family(3, 4, 1)
    rec = classify_cycle(f, (2,), 1)
    children, tails = lift_cycles(f, rec)
    lengths = sorted(c.length for c in children)
    assert lengths == [1, 2] and not tails
    partial = [c for c in children if c.length == 1][0]
    assert partial.cycle_class is CycleClass.PARTIALLY_SPLITS


def test_lift_consistency_randomized_families():
    # Every computed lift across 60+ random instances obeys the rigid
    # pattern (lift_cycles raises on any deviation).
    rng = random.Random(23)
    instances = 0
    checked = 0
    while instances < 60:
        p = rng.choice([2, 3, 5, 7])
        deg = rng.randrange(2, 5)
        coeffs = [rng.randrange(0, 40) for _ in range(deg)] + [rng.randrange(1, 12)]
        f = PadicPolynomial.make(p, coeffs)
        depth = {2: 5, 3: 4, 5: 3, 7: 3}[p]
        checked += validate_lift_tree(f, ResidueSet.all_of_zp(p), depth)
        instances += 1
    assert checked > 200


def test_validate_lift_pattern_catches_fabricated_violation():
    f = quad_over(4)
    parent = classify_cycle(f, (2,), 1)
    children, tails = lift_cycles(f, parent)
    fake = CycleRecord(3, 2, children[0].elements, 0, 1, 0, 0, CycleClass.GROWS_TAILS)
    with pytest.raises(InternalInconsistency):
        _validate_lift_pattern(f, parent, [fake], tails)
    with pytest.raises(InternalInconsistency):
        _validate_lift_pattern(f, parent, children, {99: (0, 1)})


def test_minimality_examples():
    assert minimality_check(quad_over(4), ResidueSet.single_class(3, 2, 1), 5) == [True] * 5
    odometer = PadicPolynomial.make(2, [1, 1])  # x + 1
    assert minimality_check(odometer, ResidueSet.all_of_zp(2), 6) == [True] * 6
    square = PadicPolynomial.make(3, [0, 0, 1])
    per_level = minimality_check(square, ResidueSet.single_class(3, 1, 1), 3)
    assert per_level[0] is True and per_level[1] is False


def test_minimality_cycle_lengths_multiply_by_p():
    f = quad_over(4)
    dom = ResidueSet.single_class(3, 2, 1)
    for n in range(1, 6):
        m = build_level_map(f, dom, n)
        recs, tails = cycles_at_level(m)
        assert not tails and len(recs) == 1
        assert recs[0].length == 3 ** (n - 1)


def test_grows_tails_basin_two_cycle():
    f = PadicPolynomial.make(2, [1, 0, 1])
    rec = classify_cycle(f, (0, 1), 1)
    basin = grows_tails_basin(f, rec, precision=40, samples=25, rng=random.Random(3))
    x0 = basin.residue_orbit[0]
    g2 = f.iterate_mod(x0, 2, 40, derivatives=0)[0]
    assert g2 == x0
    assert basin.samples_checked == 25
    # contraction gains at least one digit per period
    assert basin.max_periods <= 45


def test_grows_tails_basin_trivial_contraction():
    # f(x) = p x: the exact fixed point 0 attracts all of Z_p (the cycle
    # ball is 5Z_5; the other residues reach it as level-1 tails).
    f = PadicPolynomial.make(5, [0, 5])
    rec = classify_cycle(f, (0,), 1)
    assert rec.cycle_class is CycleClass.GROWS_TAILS
    basin = grows_tails_basin(f, rec, precision=20, samples=10, rng=random.Random(6))
    assert basin.periodic_point.is_zero
    rep = minimal_decomposition(f, ResidueSet.all_of_zp(5), 3)
    comp = rep.attracting_components[0]
    covered = set(comp.support.residues(3)) | set(rep.basin_assignments)
    assert covered == set(range(5**3))  # everything attracted
    assert set(rep.basin_assignments.values()) == {comp.ident}


def test_grows_tails_basin_fixed_point_n6():
    f = family(3, 6, 1)
    rec = classify_cycle(f, (2,), 1)
    basin = grows_tails_basin(f, rec, precision=30, samples=15, rng=random.Random(4))
    assert basin.residue_orbit[0] % 3 == 2


def test_decomposition_whole_ring_quadratic():
    rep = minimal_decomposition(quad_over(4), ResidueSet.all_of_zp(3), 5)
    assert [c.support.spec_string() for c in rep.minimal_components] == ["class:2 mod 3"]
    assert rep.minimal_components[0].certified
    assert not rep.undecided
    # 0 and 1 mod 3 funnel into the minimal component
    assert set(rep.basin_assignments.values()) == {rep.minimal_components[0].ident}
    assert rep.partition_ok()


def test_decomposition_three_singletons():
    rep = minimal_decomposition(quad_over(7), ResidueSet.all_of_zp(3), 5)
    supports = sorted(c.support.spec_string() for c in rep.minimal_components)
    assert supports == ["class:2 mod 9", "class:5 mod 9", "class:8 mod 9"]
    assert all(c.certified for c in rep.minimal_components)
    assert rep.partition_ok()


def test_decomposition_attracting_two_cycle():
    rep = minimal_decomposition(PadicPolynomial.make(2, [1, 0, 1]), ResidueSet.all_of_zp(2), 6)
    assert len(rep.attracting_components) == 1
    comp = rep.attracting_components[0]
    assert comp.support.spec_string() == "all"
    assert len(comp.periodic_orbit) == 2
    assert not rep.minimal_components and not rep.undecided
    assert rep.partition_ok()


def test_decomposition_odometer():
    rep = minimal_decomposition(PadicPolynomial.make(3, [1, 1]), ResidueSet.all_of_zp(3), 4)
    assert len(rep.minimal_components) == 1
    assert rep.minimal_components[0].support.spec_string() == "all"
    assert rep.partition_ok()


def test_decomposition_indifferent_point_square_map():
    # x**2 on 1 + 3Z_3: the fixed point 1 has multiplier 2 (partial split chain).
    rep = minimal_decomposition(PadicPolynomial.make(3, [0, 0, 1]),
                                ResidueSet.single_class(3, 1, 1), 5)
    assert any(c.periodic_orbit[0] % 3**5 == 1 for c in rep.indifferent_points)
    assert rep.partition_ok()


def test_decomposition_partition_randomized():
    rng = random.Random(99)
    for _ in range(50):
        p = rng.choice([2, 3, 5])
        deg = rng.randrange(2, 5)
        coeffs = [rng.randrange(0, 30) for _ in range(deg)] + [rng.randrange(1, 10)]
        f = PadicPolynomial.make(p, coeffs)
        depth = {2: 7, 3: 5, 5: 4}[p]
        rep = minimal_decomposition(f, ResidueSet.all_of_zp(p), depth)
        assert rep.partition_ok(), (p, coeffs)


def test_decomposition_partial_split_schedule_certificate():
    # a = 1, N = 4 on 2+3Z_3: level-1 partial split, the 2-cycle lift grows
    # forever by the split-schedule argument (A_2 = 1 < nd = 2).
    f = family(3, 4, 1)
    rep = minimal_decomposition(f, ResidueSet.single_class(3, 2, 1), 5)
    pair = [c for c in rep.minimal_components if c.support.density() == Fraction(2, 9)]
    assert pair and pair[0].certified
    assert pair[0].certificate in ("partial-split-schedule", "stable-growth")
