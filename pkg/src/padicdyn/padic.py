"""Finite-precision arithmetic in the field Q_p.

A nonzero element is stored as ``p**valuation * unit`` where ``unit`` is an
integer in ``[1, p**precision - 1]`` coprime to ``p``.  ``precision`` is the
number of known significant base-p digits (relative precision), so the value
is known modulo ``p**(valuation + precision)``.  Exact zero carries an
``is_zero`` flag instead of a valuation.

Precision is propagated pessimistically: multiplicative operations keep the
minimum relative precision of the operands, while cancellation in addition
reduces it.  When every known digit cancels, :class:`PrecisionExhausted` is
raised rather than silently returning a fake zero.

Norms are exact powers of p, represented by :class:`PPow`; no floats appear
anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import (
    DivisionByZero,
    ParseError,
    PrecisionExhausted,
    PrimeMismatch,
    RangeError,
)

DEFAULT_PRECISION = 64

RationalLike = Union[int, Fraction]


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (inputs are small)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def valuation_int(n: int, p: int) -> int:
    """v_p(n) for a nonzero integer n."""
    if n == 0:
        raise RangeError("valuation of 0 is undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation_fraction(r: RationalLike, p: int) -> int:
    """v_p(r) for a nonzero rational r."""
    r = Fraction(r)
    if r == 0:
        raise RangeError("valuation of 0 is undefined")
    return valuation_int(r.numerator, p) - valuation_int(r.denominator, p)


@dataclass(frozen=True, order=False)
class PPow:
    """An exact p-power magnitude ``p**exponent``, or zero.

    Used for norms and distances; all comparisons are exact integer
    comparisons on exponents.
    """

    prime: int
    exponent: int = 0
    is_zero: bool = False

    @classmethod
    def zero(cls, p: int) -> "PPow":
        return cls(p, 0, True)

    @classmethod
    def one(cls, p: int) -> "PPow":
        return cls(p, 0)

    def as_fraction(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if self.exponent >= 0:
            return Fraction(self.prime**self.exponent)
        return Fraction(1, self.prime ** (-self.exponent))

    def _key(self, other: object):
        if isinstance(other, PPow):
            if other.prime != self.prime:
                raise PrimeMismatch(f"{self.prime} vs {other.prime}")
            return other
        if isinstance(other, (int, Fraction)):
            return None  # compare through fractions
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        o = self._key(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return self.as_fraction() == Fraction(other)  # type: ignore[arg-type]
        if self.is_zero or o.is_zero:
            return self.is_zero and o.is_zero
        return self.exponent == o.exponent

    def __lt__(self, other: object) -> bool:
        o = self._key(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return self.as_fraction() < Fraction(other)  # type: ignore[arg-type]
        if self.is_zero:
            return not o.is_zero
        if o.is_zero:
            return False
        return self.exponent < o.exponent

    def __le__(self, other: object) -> bool:
        return self == other or self < other

    def __gt__(self, other: object) -> bool:
        return not self <= other

    def __ge__(self, other: object) -> bool:
        return not self < other

    def __hash__(self) -> int:
        return hash((self.prime, "0" if self.is_zero else self.exponent))

    def __mul__(self, other: "PPow") -> "PPow":
        if self.prime != other.prime:
            raise PrimeMismatch(f"{self.prime} vs {other.prime}")
        if self.is_zero or other.is_zero:
            return PPow.zero(self.prime)
        return PPow(self.prime, self.exponent + other.exponent)

    def __truediv__(self, other: "PPow") -> "PPow":
        if self.prime != other.prime:
            raise PrimeMismatch(f"{self.prime} vs {other.prime}")
        if other.is_zero:
            raise DivisionByZero("division by zero norm")
        if self.is_zero:
            return PPow.zero(self.prime)
        return PPow(self.prime, self.exponent - other.exponent)

    def __pow__(self, k: int) -> "PPow":
        if self.is_zero:
            if k <= 0:
                raise DivisionByZero("0 to a nonpositive power")
            return self
        return PPow(self.prime, self.exponent * k)

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        return f"{self.prime}^{self.exponent}"


class PadicNumber:
    """An element of Q_p at finite relative precision.

    Instances are immutable; arithmetic returns new values.  Two values
    compare equal iff their valuations match and their units agree modulo
    ``p**min(prec1, prec2)``.
    """

    __slots__ = ("prime", "valuation", "unit", "precision", "is_zero")

    def __init__(self, prime: int, valuation: int, unit: int, precision: int, is_zero: bool = False):
        if precision < 1 and not is_zero:
            raise PrecisionExhausted("relative precision must be at least 1")
        if not is_zero:
            mod = prime**precision
            unit %= mod
            if unit % prime == 0:
                raise RangeError("unit part must be coprime to p")
        else:
            valuation, unit, precision = 0, 0, 0
        object.__setattr__(self, "prime", prime)
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "is_zero", is_zero)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("PadicNumber is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> "PadicNumber":
        return cls(p, 0, 0, 0, is_zero=True)

    @classmethod
    def one(cls, p: int, precision: int = DEFAULT_PRECISION) -> "PadicNumber":
        return cls(p, 0, 1, precision)

    @classmethod
    def from_rational(cls, p: int, value: RationalLike, precision: int = DEFAULT_PRECISION) -> "PadicNumber":
        value = Fraction(value)
        if value == 0:
            return cls.zero(p)
        num, den = value.numerator, value.denominator
        vn = valuation_int(num, p)
        vd = valuation_int(den, p)
        mod = p**precision
        u_num = (num // p**vn) % mod
        u_den = (den // p**vd) % mod
        unit = u_num * pow(u_den, -1, mod) % mod
        return cls(p, vn - vd, unit, precision)

    @classmethod
    def from_integer_residue(cls, p: int, residue: int, abs_precision: int) -> "PadicNumber":
        """Value known to be ``residue`` modulo ``p**abs_precision``."""
        residue %= p**abs_precision
        if residue == 0:
            raise PrecisionExhausted(
                f"residue 0 mod {p}^{abs_precision} does not determine a nonzero value"
            )
        v = valuation_int(residue, p)
        return cls(p, v, residue // p**v, abs_precision - v)

    # -- basic queries -----------------------------------------------------

    @property
    def absolute_precision(self) -> int:
        """The value is known modulo p**absolute_precision."""
        if self.is_zero:
            raise RangeError("exact zero has unbounded absolute precision")
        return self.valuation + self.precision

    def norm(self) -> PPow:
        if self.is_zero:
            return PPow.zero(self.prime)
        return PPow(self.prime, -self.valuation)

    def digits(self, count: int) -> list[int]:
        """First ``count`` base-p digits of the unit part (least significant first)."""
        if self.is_zero:
            return [0] * count
        if count > self.precision:
            raise PrecisionExhausted(f"only {self.precision} digits known")
        out = []
        u = self.unit
        for _ in range(count):
            u, d = divmod(u, self.prime)
            out.append(d)
        return out

    def residue(self, abs_precision: int) -> int:
        """Canonical representative modulo p**abs_precision (valuation >= 0 only)."""
        if self.is_zero:
            return 0
        if self.valuation < 0:
            raise RangeError("residue undefined for negative valuation")
        if abs_precision > self.absolute_precision:
            raise PrecisionExhausted(
                f"known only mod p^{self.absolute_precision}, asked for p^{abs_precision}"
            )
        return (self.unit * self.prime**self.valuation) % self.prime**abs_precision

    def truncated(self, precision: int) -> "PadicNumber":
        """Same value at a lower relative precision."""
        if self.is_zero:
            return self
        if precision > self.precision:
            raise PrecisionExhausted("cannot invent digits beyond known precision")
        return PadicNumber(self.prime, self.valuation, self.unit % self.prime**precision, precision)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise PrimeMismatch(f"{self.prime} vs {other.prime}")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNumber.from_rational(self.prime, other, self.precision or DEFAULT_PRECISION)
        return NotImplemented

    def __add__(self, other) -> "PadicNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        a, b = (self, o) if self.valuation <= o.valuation else (o, self)
        p = self.prime
        abs_prec = min(a.absolute_precision, b.absolute_precision)
        rel = abs_prec - a.valuation
        if rel <= 0:
            raise PrecisionExhausted("no overlapping digits in addition")
        mod = p**rel
        shift = b.valuation - a.valuation
        m = (a.unit + (b.unit * p**shift if shift < rel else 0)) % mod
        if m == 0:
            raise PrecisionExhausted(
                f"sum vanishes mod {p}^{abs_prec}: indistinguishable from 0"
            )
        w = valuation_int(m, p)
        return PadicNumber(p, a.valuation + w, m // p**w, rel - w)

    __radd__ = __add__

    def __neg__(self) -> "PadicNumber":
        if self.is_zero:
            return self
        mod = self.prime**self.precision
        return PadicNumber(self.prime, self.valuation, (-self.unit) % mod, self.precision)

    def __sub__(self, other) -> "PadicNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "PadicNumber":
        return (-self) + other

    def __mul__(self, other) -> "PadicNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return PadicNumber.zero(self.prime)
        prec = min(self.precision, o.precision)
        mod = self.prime**prec
        return PadicNumber(self.prime, self.valuation + o.valuation, self.unit * o.unit % mod, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PadicNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero:
            raise DivisionByZero("division by exact zero")
        if self.is_zero:
            return self
        prec = min(self.precision, o.precision)
        mod = self.prime**prec
        unit = self.unit * pow(o.unit, -1, mod) % mod
        return PadicNumber(self.prime, self.valuation - o.valuation, unit, prec)

    def __rtruediv__(self, other) -> "PadicNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> "PadicNumber":
        if not isinstance(k, int):
            raise RangeError("exponents must be integers")
        if self.is_zero:
            if k <= 0:
                raise DivisionByZero("0 to a nonpositive power")
            return self
        if k == 0:
            return PadicNumber.one(self.prime, self.precision)
        base = self if k > 0 else PadicNumber.one(self.prime, self.precision) / self
        mod = base.prime**base.precision
        e = abs(k)
        return PadicNumber(base.prime, base.valuation * e, pow(base.unit, e, mod), base.precision)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero or o.is_zero:
            return self.is_zero and o.is_zero
        if self.valuation != o.valuation:
            return False
        prec = min(self.precision, o.precision)
        mod = self.prime**prec
        return self.unit % mod == o.unit % mod

    def __hash__(self) -> int:
        if self.is_zero:
            return hash((self.prime, "zero"))
        return hash((self.prime, self.valuation, self.unit % self.prime))

    def __repr__(self) -> str:
        if self.is_zero:
            return f"0 (exact, p={self.prime})"
        shown = self.digits(min(6, self.precision))
        tail = "..." if self.precision > 6 else ""
        return (
            f"{self.prime}^{self.valuation}*({'+'.join(str(d) for d in shown)}{tail})"
            f" [prec {self.precision}]"
        )


class _Infinity:
    """The point at infinity of the projective line (orbit bookkeeping)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Infinity"


INFINITY = _Infinity()

Extended = Union[PadicNumber, _Infinity]


def arith(op: str, lhs: PadicNumber, rhs) -> PadicNumber:
    """Dispatch one of add|sub|mul|div|pow on p-adic operands.

    ``pow`` takes an integer exponent as ``rhs``; the other operations
    accept a PadicNumber, int, or Fraction.
    """
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    if op == "pow":
        if not isinstance(rhs, int):
            raise RangeError("pow takes an integer exponent")
        return lhs**rhs
    raise ParseError(f"unknown operation {op!r}")


def distance_valuation(x: PadicNumber, y: PadicNumber) -> int | None:
    """v_p(x - y), or None when x and y agree at their joint precision.

    ``None`` means the difference vanishes modulo ``p**a`` where ``a`` is the
    smaller absolute precision of the operands; the true distance is then at
    most ``p**-a`` but is otherwise unresolved.
    """
    try:
        return (x - y).valuation
    except PrecisionExhausted:
        return None


def reassemble_digits(p: int, valuation: int, digits: Iterable[int], precision: int | None = None) -> PadicNumber:
    """Rebuild a value from its digit expansion starting at ``valuation``."""
    digits = list(digits)
    unit = 0
    for i, d in enumerate(digits):
        if not 0 <= d < p:
            raise RangeError(f"digit {d} out of range for base {p}")
        unit += d * p**i
    if unit == 0:
        raise PrecisionExhausted("all digits zero: value indistinguishable from 0")
    return PadicNumber(p, valuation, unit, precision or len(digits))


def parse_rational(text: str) -> Fraction:
    """Parse 'num' or 'num/den' with optional sign into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {text!r}: {exc}") from exc


def parse_padic_literal(p: int, text: str, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    """Parse a p-adic literal.

    Accepted forms:
      * ``"num/den"`` or ``"num"``: exact rational, converted at ``precision``.
      * ``"v:<int> u:<digits>"``: explicit valuation and unit part, the unit
        written as a conventional base-p integer string (most significant
        digit first; digits beyond 9 use letters, so this form needs p <= 36).
    """
    text = text.strip()
    if text.startswith("v:"):
        parts = text.split()
        if len(parts) != 2 or not parts[1].startswith("u:"):
            raise ParseError(f"expected 'v:<int> u:<digits>', got {text!r}")
        try:
            v = int(parts[0][2:])
        except ValueError as exc:
            raise ParseError(f"bad valuation in {text!r}") from exc
        if p > 36:
            raise ParseError("digit-string literals require p <= 36")
        try:
            unit = int(parts[1][2:], p)
        except ValueError as exc:
            raise ParseError(f"bad base-{p} digit string in {text!r}") from exc
        if unit % p == 0:
            raise ParseError("unit part of a p-adic literal must not be divisible by p")
        # The literal denotes the exact rational p**v * unit.
        return PadicNumber.from_rational(p, Fraction(unit) * Fraction(p) ** v, precision)
    return PadicNumber.from_rational(p, parse_rational(text), precision)
