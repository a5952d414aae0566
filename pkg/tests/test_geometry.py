"""Balls, residue sets, and the spherical metric."""

import random
from fractions import Fraction

import pytest

from padicdyn.errors import ParseError
from padicdyn.geometry import (
    Ball,
    BallRelation,
    ProjectivePoint,
    ResidueSet,
    spherical_distance,
    spherical_distance_extended,
)
from padicdyn.padic import INFINITY, PadicNumber, PPow


def ball(p, c, t):
    return Ball.from_residue_class(p, c, t)


def test_ball_relations_examples():
    assert ball(3, 0, 1).relation(ball(3, 1, 1)) is BallRelation.DISJOINT
    assert ball(3, 0, 2).relation(ball(3, 0, 1)) is BallRelation.A_IN_B
    assert ball(3, 0, 1).relation(ball(3, 0, 2)) is BallRelation.B_IN_A
    for k in (0, 1, -2, 7):
        assert ball(3, 2, 2).relation(ball(3, 2 + 9 * k, 2)) is BallRelation.EQUAL


def test_ball_relation_trichotomy_randomized():
    rng = random.Random(5)
    for _ in range(500):
        p = rng.choice([2, 3, 5])
        a = ball(p, rng.randrange(p**3), rng.randrange(0, 4))
        b = ball(p, rng.randrange(p**3), rng.randrange(0, 4))
        rel = a.relation(b)
        ra = set(x % p**3 for x in range(p**4) if a.contains(x))
        rb = set(x % p**3 for x in range(p**4) if b.contains(x))
        if rel is BallRelation.EQUAL:
            assert ra == rb
        elif rel is BallRelation.DISJOINT:
            assert not (ra & rb)
        elif rel is BallRelation.A_IN_B:
            assert ra < rb
        else:
            assert rb < ra


def test_ball_membership():
    b = ball(5, 2, 2)  # 2 + 25 Z_5
    assert b.contains(2) and b.contains(27) and not b.contains(7)
    assert b.contains(Fraction(2 + 25 * 3, 1))


def test_spherical_distance_examples():
    zero = ProjectivePoint.from_extended(5, 0)
    inf = ProjectivePoint.from_extended(5, INFINITY)
    assert spherical_distance(zero, inf) == PPow(5, 0)  # distance 1
    x = ProjectivePoint.from_extended(5, Fraction(7, 3))
    assert spherical_distance(x, x).is_zero
    # Oracle: direct evaluation of the displayed formula at p = 3.
    assert spherical_distance_extended(3, 9, INFINITY) == PPow(3, 0)
    assert spherical_distance_extended(3, Fraction(1, 9), INFINITY) == PPow(3, -2)


def test_spherical_distance_agrees_with_affine_formula():
    rng = random.Random(2)
    p = 3
    for _ in range(300):
        x = Fraction(rng.randrange(-200, 200), rng.randrange(1, 100))
        y = Fraction(rng.randrange(-200, 200), rng.randrange(1, 100))
        if x == y:
            continue
        rho = spherical_distance_extended(p, x, y).as_fraction()
        def nrm(v):
            if v == 0:
                return Fraction(0)
            from padicdyn.padic import valuation_fraction
            e = valuation_fraction(v, p)
            return Fraction(p) ** (-e)
        expected = nrm(x - y) / (max(nrm(x), 1) * max(nrm(y), 1))
        assert rho == expected


def test_spherical_strong_triangle_randomized():
    rng = random.Random(9)
    p = 5
    pts = []
    for _ in range(40):
        kind = rng.randrange(3)
        if kind == 0:
            pts.append(INFINITY)
        else:
            pts.append(Fraction(rng.randrange(-500, 500), rng.randrange(1, 200)))
    for _ in range(400):
        a, b, c = rng.sample(pts, 3)
        ab = spherical_distance_extended(p, a, b).as_fraction()
        bc = spherical_distance_extended(p, b, c).as_fraction()
        ac = spherical_distance_extended(p, a, c).as_fraction()
        assert ac <= max(ab, bc)


def test_projective_normalization():
    big = ProjectivePoint.from_extended(7, Fraction(1, 7))  # norm 7 > 1
    assert big.x == PadicNumber.one(7) and big.y.norm() < PPow(7, 0)
    small = ProjectivePoint.from_extended(7, 14)
    assert small.y == PadicNumber.one(7)
    inf = ProjectivePoint.from_extended(7, INFINITY)
    assert inf.is_infinity()


def test_residue_set_parse_and_residues():
    s = ResidueSet.parse(3, "class:2 mod 9")
    assert s.classes == ((2, 2),)
    assert s.residues(2) == [2]
    assert s.residues(3) == [2, 11, 20]
    assert s.residues(1) == [2]  # class meeting at coarser level
    u = ResidueSet.parse(5, "sphere:1")
    assert u.residues(1) == [1, 2, 3, 4]
    assert ResidueSet.parse(7, "all").residues(1) == list(range(7))
    with pytest.raises(ParseError):
        ResidueSet.parse(3, "class:2 mod 6")
    with pytest.raises(ParseError):
        ResidueSet.parse(3, "nonsense")


def test_residue_set_normalization_and_union():
    # Complete sibling family coalesces into the parent.
    s = ResidueSet.build(2, [(0, 1), (1, 1)])
    assert s.spec_string() == "all"
    t = ResidueSet.build(3, [(2, 2), (5, 2), (8, 2)])
    assert t.classes == ((2, 1),)
    nested = ResidueSet.build(3, [(2, 1), (5, 2)])
    assert nested.classes == ((2, 1),)  # 5 mod 9 lies inside 2 mod 3
    u = ResidueSet.single_class(3, 0, 1).union(ResidueSet.single_class(3, 1, 1))
    assert u.density() == Fraction(2, 3)


def test_residue_set_spec_round_trip():
    for spec in ("all", "sphere:1", "class:2 mod 9"):
        s = ResidueSet.parse(3, spec)
        assert ResidueSet.parse(3, s.spec_string().split(" | ")[0]) == s or "|" in s.spec_string()
