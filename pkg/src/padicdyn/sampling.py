"""Deterministic random sampling of p-adic values for verifier runs.

Everything draws from a caller-supplied ``random.Random`` so a fixed seed
reproduces every report byte for byte.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .padic import PadicNumber


def random_unit_int(rng: random.Random, p: int, digits: int) -> int:
    """A uniformly random unit of Z/p**digits."""
    while True:
        u = rng.randrange(1, p**digits)
        if u % p != 0:
            return u


def random_zp(rng: random.Random, p: int, precision: int) -> PadicNumber:
    """A random element of Z_p known mod p**precision (may be 0 mod p)."""
    r = rng.randrange(1, p**precision)
    return PadicNumber.from_integer_residue(p, r, precision)


def random_with_valuation(rng: random.Random, p: int, v: int, precision: int) -> PadicNumber:
    """A random element of exact valuation v."""
    u = random_unit_int(rng, p, precision)
    return PadicNumber.from_rational(p, Fraction(u) * Fraction(p) ** v, precision)


def random_in_ball(rng: random.Random, p: int, center: int, level: int, precision: int) -> PadicNumber:
    """A random element of the class center + p**level Z_p."""
    r = center % p**level + rng.randrange(p ** (precision - level)) * p**level
    if r == 0:
        r = p**level  # keep representable; still inside the ball
    return PadicNumber.from_integer_residue(p, r, precision)


def random_rational_unit(rng: random.Random, p: int, size: int = 50) -> Fraction:
    """A random rational that is a p-adic unit (for exact-identity checks)."""
    while True:
        num = rng.randrange(1, size)
        den = rng.randrange(1, size)
        if num % p != 0 and den % p != 0:
            return Fraction(num, den) * rng.choice([1, -1])


def random_rational_with_valuation(rng: random.Random, p: int, v: int, digits: int = 24) -> Fraction:
    """An exact rational of exact valuation v (orbit seeds at any precision)."""
    u = random_unit_int(rng, p, digits)
    return Fraction(u) * Fraction(p) ** v
