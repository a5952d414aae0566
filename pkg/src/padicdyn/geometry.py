"""Balls, residue-class sets, and the spherical metric on P1(Q_p).

A ball ``D(c, p**-tau)`` is the set of x with ``v_p(x - c) >= tau``; for
``tau >= 1`` and an integer center this is exactly a congruence class
``c mod p**tau``.  Ultrametric geometry makes any two balls equal, disjoint,
or nested, which :func:`Ball.relation` decides exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import ParseError, PrecisionExhausted, PrimeMismatch, RangeError
from .padic import (
    DEFAULT_PRECISION,
    INFINITY,
    Extended,
    PadicNumber,
    PPow,
    distance_valuation,
)


class BallRelation(enum.Enum):
    EQUAL = "equal"
    DISJOINT = "disjoint"
    A_IN_B = "a-in-b"
    B_IN_A = "b-in-a"


@dataclass(frozen=True)
class Ball:
    """Closed (= open) disk of radius ``p**-radius_exponent`` around ``center``."""

    prime: int
    center: PadicNumber
    radius_exponent: int

    def __post_init__(self):
        c = self.center
        if not c.is_zero and c.absolute_precision < self.radius_exponent:
            raise PrecisionExhausted(
                "ball center must be known at least to the radius scale"
            )

    @classmethod
    def from_residue_class(cls, p: int, residue: int, level: int, precision: int = DEFAULT_PRECISION) -> "Ball":
        """The congruence class ``residue mod p**level`` as a ball."""
        if level < 0:
            raise RangeError("level must be nonnegative")
        center = PadicNumber.from_rational(p, residue, max(precision, level + 1))
        return cls(p, center, level)

    @property
    def radius(self) -> PPow:
        return PPow(self.prime, -self.radius_exponent)

    def contains(self, x: Union[PadicNumber, int, Fraction]) -> bool:
        if not isinstance(x, PadicNumber):
            x = PadicNumber.from_rational(self.prime, x, self.radius_exponent + DEFAULT_PRECISION)
        if x.prime != self.prime:
            raise PrimeMismatch(f"{self.prime} vs {x.prime}")
        if self.center.is_zero:
            return x.is_zero or x.valuation >= self.radius_exponent
        if x.is_zero:
            return self.center.valuation >= self.radius_exponent
        d = distance_valuation(x, self.center)
        return d is None or d >= self.radius_exponent

    def relation(self, other: "Ball") -> BallRelation:
        """Exactly one of equal / disjoint / nested, decided exactly."""
        if self.prime != other.prime:
            raise PrimeMismatch(f"{self.prime} vs {other.prime}")
        if self.center.is_zero and other.center.is_zero:
            d = None
        elif self.center.is_zero:
            d = other.center.valuation
        elif other.center.is_zero:
            d = self.center.valuation
        else:
            d = distance_valuation(self.center, other.center)
        big = min(self.radius_exponent, other.radius_exponent)
        if d is not None and d < big:
            return BallRelation.DISJOINT
        if self.radius_exponent == other.radius_exponent:
            return BallRelation.EQUAL
        if self.radius_exponent > other.radius_exponent:
            return BallRelation.A_IN_B
        return BallRelation.B_IN_A

    def __repr__(self) -> str:
        return f"D({self.center!r}, {self.prime}^-{self.radius_exponent})"


@dataclass(frozen=True)
class ResidueSet:
    """A finite disjoint union of congruence classes ``c mod p**t`` in Z_p.

    ``classes`` is a normalized tuple of ``(c, t)`` pairs: sorted, reduced
    (``0 <= c < p**t``), pairwise disjoint, with classes contained in another
    class absorbed.  ``t = 0`` denotes all of Z_p.
    """

    prime: int
    classes: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, p: int, classes: Iterable[tuple[int, int]]) -> "ResidueSet":
        norm: list[tuple[int, int]] = []
        for c, t in classes:
            if t < 0:
                raise RangeError("class level must be nonnegative")
            norm.append((c % p**t, t))
        norm.sort(key=lambda ct: (ct[1], ct[0]))
        kept: list[tuple[int, int]] = []
        for c, t in norm:
            if any(c % p**t0 == c0 for c0, t0 in kept if t0 <= t):
                continue  # already covered by a coarser class
            kept.append((c, t))
        # Coalesce complete sibling families into their parent class.
        changed = True
        while changed:
            changed = False
            groups: dict[tuple[int, int], set[int]] = {}
            for c, t in kept:
                if t > 0:
                    groups.setdefault((t, c % p ** (t - 1)), set()).add(c)
            for (t, parent), cs in groups.items():
                if len(cs) == p:
                    kept = [(c0, t0) for c0, t0 in kept if not (t0 == t and c0 in cs)]
                    kept.append((parent, t - 1))
                    changed = True
                    break
        kept.sort()
        return cls(p, tuple(kept))

    @classmethod
    def all_of_zp(cls, p: int) -> "ResidueSet":
        return cls.build(p, [(0, 0)])

    @classmethod
    def unit_sphere(cls, p: int) -> "ResidueSet":
        """S(0,1) = Z_p minus pZ_p, as the p-1 unit classes mod p."""
        return cls.build(p, [(c, 1) for c in range(1, p)])

    @classmethod
    def single_class(cls, p: int, c: int, t: int) -> "ResidueSet":
        return cls.build(p, [(c, t)])

    @classmethod
    def parse(cls, p: int, spec: str) -> "ResidueSet":
        """Parse 'all' | 'sphere:1' | 'class:c mod m' (m a power of p)."""
        spec = spec.strip()
        if spec == "all":
            return cls.all_of_zp(p)
        if spec == "sphere:1":
            return cls.unit_sphere(p)
        if spec.startswith("class:"):
            body = spec[len("class:"):].strip()
            parts = body.split()
            if len(parts) != 3 or parts[1] != "mod":
                raise ParseError(f"expected 'class:c mod m', got {spec!r}")
            try:
                c, m = int(parts[0]), int(parts[2])
            except ValueError as exc:
                raise ParseError(f"bad integers in {spec!r}") from exc
            t = 0
            mm = m
            while mm % p == 0:
                mm //= p
                t += 1
            if mm != 1 or m < 1:
                raise ParseError(f"modulus {m} is not a power of {p}")
            return cls.single_class(p, c, t)
        raise ParseError(f"unknown domain spec {spec!r}")

    def spec_string(self) -> str:
        if self.classes == ((0, 0),):
            return "all"
        if self == ResidueSet.unit_sphere(self.prime):
            return "sphere:1"
        return " | ".join(f"class:{c} mod {self.prime**t}" for c, t in self.classes)

    @property
    def max_level(self) -> int:
        return max((t for _, t in self.classes), default=0)

    def density(self) -> Fraction:
        return sum((Fraction(1, self.prime**t) for _, t in self.classes), Fraction(0))

    def contains_residue(self, r: int, level: int) -> bool:
        """Does the full class ``r mod p**level`` lie inside the set?"""
        if level < self.max_level:
            raise RangeError("level too coarse to decide containment")
        return any(r % self.prime**t == c for c, t in self.classes)

    def meets_residue(self, r: int, level: int) -> bool:
        """Does the class ``r mod p**level`` intersect the set?"""
        p = self.prime
        for c, t in self.classes:
            m = min(level, t)
            if r % p**m == c % p**m:
                return True
        return False

    def residue_count(self, level: int) -> int:
        """Number of level-``level`` residues meeting the set (no tabulation)."""
        p = self.prime
        if level < self.max_level:
            return len({c % p**level for c, _ in self.classes})
        return sum(p ** (level - t) for _, t in self.classes)

    def residues(self, level: int) -> list[int]:
        """Representatives mod p**level of the classes meeting the set.

        For ``level >= max_level`` these classes exactly tile the set; this
        is the induced state space at that level.
        """
        p = self.prime
        out: set[int] = set()
        for c, t in self.classes:
            if level <= t:
                out.add(c % p**level)
            else:
                step = p**t
                out.update(c + k * step for k in range(p ** (level - t)))
        return sorted(out)

    def union(self, other: "ResidueSet") -> "ResidueSet":
        if self.prime != other.prime:
            raise PrimeMismatch(f"{self.prime} vs {other.prime}")
        return ResidueSet.build(self.prime, self.classes + other.classes)

    def __repr__(self) -> str:
        return f"ResidueSet({self.prime}, {self.spec_string()!r})"


@dataclass(frozen=True)
class ProjectivePoint:
    """A point [x : y] of P1(Q_p), canonically normalized.

    The representative is chosen with max(|x|, |y|) = 1: finite points of
    norm <= 1 are [x : 1], larger finite points are [1 : 1/x], and the point
    at infinity is [1 : 0].
    """

    x: PadicNumber
    y: PadicNumber

    def __post_init__(self):
        if self.x.is_zero and self.y.is_zero:
            raise RangeError("projective coordinates must not both be zero")

    @classmethod
    def from_extended(cls, p: int, value: Extended | int | Fraction, precision: int = DEFAULT_PRECISION) -> "ProjectivePoint":
        if value is INFINITY:
            return cls(PadicNumber.one(p, precision), PadicNumber.zero(p))
        if not isinstance(value, PadicNumber):
            value = PadicNumber.from_rational(p, value, precision)
        if value.is_zero or value.valuation >= 0:
            return cls(value, PadicNumber.one(p, precision))
        return cls(PadicNumber.one(p, precision), PadicNumber.one(p, precision) / value)

    @property
    def prime(self) -> int:
        return self.x.prime if not self.x.is_zero else self.y.prime

    def is_infinity(self) -> bool:
        return self.y.is_zero


def spherical_distance(a: ProjectivePoint, b: ProjectivePoint) -> PPow:
    """The spherical metric |x1 y2 - x2 y1| / (max-norm products).

    With canonically normalized points both denominators equal 1.  Points
    that agree at working precision get distance exactly 0.
    """
    p = a.prime
    if p != b.prime:
        raise PrimeMismatch(f"{p} vs {b.prime}")
    try:
        cross = a.x * b.y - b.x * a.y
    except PrecisionExhausted:
        return PPow.zero(p)
    return cross.norm()


def spherical_distance_extended(p: int, u: Extended | int | Fraction, v: Extended | int | Fraction,
                                precision: int = DEFAULT_PRECISION) -> PPow:
    """Spherical distance between two extended values (affine or infinity)."""
    return spherical_distance(
        ProjectivePoint.from_extended(p, u, precision),
        ProjectivePoint.from_extended(p, v, precision),
    )
