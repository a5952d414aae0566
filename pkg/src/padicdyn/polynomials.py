"""Polynomials over Q_p with exact rational coefficients.

Coefficients are stored as :class:`fractions.Fraction`, so evaluation at
rational points is exact and reduction modulo ``p**n`` is available whenever
no coefficient denominator is divisible by p.  Evaluation at
:class:`~padicdyn.padic.PadicNumber` arguments propagates finite precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence, Union

from .errors import ParseError, PreconditionViolated, RangeError
from .padic import DEFAULT_PRECISION, PadicNumber, valuation_fraction

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class PadicPolynomial:
    prime: int
    coefficients: tuple[Fraction, ...]  # ascending degree, no trailing zeros

    @classmethod
    def make(cls, p: int, coefficients: Sequence[Scalar]) -> "PadicPolynomial":
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return cls(p, tuple(coeffs))

    @classmethod
    def parse(cls, p: int, text: str) -> "PadicPolynomial":
        """Parse a comma-separated coefficient list, constant term first."""
        try:
            coeffs = [Fraction(tok.strip()) for tok in text.split(",") if tok.strip()]
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad coefficient list {text!r}: {exc}") from exc
        if not coeffs:
            raise ParseError("empty coefficient list")
        return cls.make(p, coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient_valuations(self) -> list[int | None]:
        return [None if c == 0 else valuation_fraction(c, self.prime) for c in self.coefficients]

    def has_integral_coefficients(self) -> bool:
        """True when every coefficient lies in Z_p."""
        return all(c == 0 or valuation_fraction(c, self.prime) >= 0 for c in self.coefficients)

    def __call__(self, x):
        if isinstance(x, PadicNumber):
            return self._eval_padic(x)
        return self.eval_exact(x)

    def eval_exact(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def _eval_padic(self, x: PadicNumber) -> PadicNumber:
        prec = x.precision or DEFAULT_PRECISION
        acc = PadicNumber.zero(self.prime)
        for c in reversed(self.coefficients):
            acc = acc * x + PadicNumber.from_rational(self.prime, c, prec)
        return acc

    def derivative(self, order: int = 1) -> "PadicPolynomial":
        if order < 0:
            raise RangeError("derivative order must be nonnegative")
        coeffs = list(self.coefficients)
        for _ in range(order):
            coeffs = [i * c for i, c in enumerate(coeffs)][1:]
        return PadicPolynomial.make(self.prime, coeffs)

    def taylor_coefficients(self, x0: Scalar) -> list[Fraction]:
        """Exact Taylor coefficients c_k = F^(k)(x0) / k! for all k."""
        x0 = Fraction(x0)
        n = len(self.coefficients)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            power = Fraction(1)
            for k in range(i, -1, -1):
                out[k] += a * comb(i, k) * power
                power *= x0
        return out

    # -- modular evaluation -------------------------------------------------

    def reduced_coefficients(self, n: int) -> list[int]:
        """Coefficients reduced mod p**n.  Denominators must be prime to p."""
        mod = self.prime**n
        out = []
        for c in self.coefficients:
            if c.denominator % self.prime == 0:
                raise PreconditionViolated(
                    f"coefficient {c} is not a p-adic integer (p={self.prime}); "
                    "pass the conjugated polynomial instead"
                )
            out.append(c.numerator * pow(c.denominator, -1, mod) % mod)
        return out

    def eval_mod(self, x: int, n: int) -> int:
        mod = self.prime**n
        acc = 0
        for c in reversed(self.reduced_coefficients(n)):
            acc = (acc * x + c) % mod
        return acc

    def iterate_mod(self, x: int, steps: int, n: int, derivatives: int = 1) -> tuple[int, int, int]:
        """(g(x), g'(x), g''(x)) mod p**n for the iterate g = f^steps.

        Derivatives follow the chain rule through the composition; set
        ``derivatives`` to 0/1/2 to control how much is computed.
        """
        mod = self.prime**n
        red = self.reduced_coefficients(n)
        red1 = _reduce_derivative(red, 1, mod) if derivatives >= 1 else None
        red2 = _reduce_derivative(red, 2, mod) if derivatives >= 2 else None
        val, d1, d2 = x % mod, 1, 0
        for _ in range(steps):
            fv = _horner(red, val, mod)
            if derivatives >= 1:
                f1 = _horner(red1, val, mod)
                if derivatives >= 2:
                    f2 = _horner(red2, val, mod)
                    d2 = (f2 * d1 * d1 + f1 * d2) % mod
                d1 = (f1 * d1) % mod
            val = fv
        return val, d1, d2

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x" if c != 1 else "x")
            else:
                terms.append(f"{c}*x^{i}" if c != 1 else f"x^{i}")
        return " + ".join(terms)


def _reduce_derivative(red: list[int], order: int, mod: int) -> list[int]:
    coeffs = list(red)
    for _ in range(order):
        coeffs = [i * c % mod for i, c in enumerate(coeffs)][1:]
    return coeffs


def _horner(red: list[int], x: int, mod: int) -> int:
    acc = 0
    for c in reversed(red):
        acc = (acc * x + c) % mod
    return acc
