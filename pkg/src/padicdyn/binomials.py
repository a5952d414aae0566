"""Digit-sum valuations of binomial coefficients and the norm bound sweep.

Two independent routes to v_p(C(N, K)) are kept deliberately separate so
they can cross-validate each other:

* :func:`binomial_valuation` uses base-p digit sums,
  ``(wt_p(K) + wt_p(N-K) - wt_p(N)) / (p - 1)``;
* :func:`binomial_valuation_legendre` subtracts factorial valuations
  computed by repeated floor division.

The bound checked by :func:`binomial_bound_check` is the inequality
``|C(N,K)|_p * p**(1-(N-K)) <= |N|_p`` for ``0 <= K <= N-2``; it always
holds, with equality exactly when p = 2 and K = N - 2.  All comparisons are
integer exponent arithmetic; no p-power is ever materialized.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import InternalInconsistency, RangeError


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-p digits of a nonnegative integer."""
    if n < 0:
        raise RangeError("digit sums are defined for nonnegative integers")
    s = 0
    while n:
        n, d = divmod(n, p)
        s += d
    return s


def binomial_valuation(n: int, k: int, p: int) -> int:
    """v_p(C(n, k)) via base-p digit sums (number of carries in k + (n-k))."""
    if not 0 <= k <= n:
        raise RangeError(f"need 0 <= k <= n, got k={k}, n={n}")
    return (digit_sum(k, p) + digit_sum(n - k, p) - digit_sum(n, p)) // (p - 1)


def factorial_valuation(n: int, p: int) -> int:
    """v_p(n!) by repeated floor division (independent oracle path)."""
    if n < 0:
        raise RangeError("factorials of negative integers are undefined")
    total = 0
    q = n // p
    while q:
        total += q
        q //= p
    return total


def binomial_valuation_legendre(n: int, k: int, p: int) -> int:
    """v_p(C(n, k)) via factorial valuations; oracle for binomial_valuation."""
    if not 0 <= k <= n:
        raise RangeError(f"need 0 <= k <= n, got k={k}, n={n}")
    return factorial_valuation(n, p) - factorial_valuation(k, p) - factorial_valuation(n - k, p)


@dataclass(frozen=True)
class BinomialValuationRecord:
    """Both sides of the norm bound for one (N, K, p), as exact p-powers.

    ``lhs_exponent`` and ``rhs_exponent`` are the exponents e such that the
    left side equals ``p**lhs_exponent`` and the right side ``p**rhs_exponent``;
    the bound is ``lhs_exponent <= rhs_exponent``.
    """

    prime: int
    N: int
    K: int
    v: int  # v_p(C(N, K))
    lhs_exponent: int  # -v + 1 - (N - K)
    rhs_exponent: int  # -v_p(N)
    equality: bool

    @property
    def holds(self) -> bool:
        return self.lhs_exponent <= self.rhs_exponent


def binomial_bound_check(N: int, K: int, p: int) -> BinomialValuationRecord:
    """Evaluate the norm bound at one point; raises if it ever fails."""
    if N < 2:
        raise RangeError("N must be at least 2")
    if not 0 <= K <= N - 2:
        raise RangeError(f"need 0 <= K <= N-2, got K={K}, N={N}")
    v = binomial_valuation(N, K, p)
    lhs = -v + 1 - (N - K)
    rhs = -digit_padic_valuation(N, p)
    rec = BinomialValuationRecord(p, N, K, v, lhs, rhs, equality=(lhs == rhs))
    if not rec.holds:
        raise InternalInconsistency(
            f"binomial norm bound failed at p={p}, N={N}, K={K}: "
            f"p^{lhs} > p^{rhs} (mathematically impossible; the implementation is broken)"
        )
    return rec


def digit_padic_valuation(n: int, p: int) -> int:
    """v_p(n) for a positive integer (local helper, digit-free)."""
    if n <= 0:
        raise RangeError("positive integers only")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass
class BinomialSweepSummary:
    prime: int
    n_max: int
    pairs_checked: int = 0
    violations: list[tuple[int, int]] = field(default_factory=list)
    equalities: list[tuple[int, int]] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    def as_dict(self) -> dict:
        # wall-clock time stays out: reports must be byte-stable given a seed
        return {
            "prime": self.prime,
            "n_max": self.n_max,
            "pairs_checked": self.pairs_checked,
            "violation_count": len(self.violations),
            "violations": self.violations[:20],
            "equality_count": len(self.equalities),
            "equalities": self.equalities[:20],
        }


def sweep_binomial_bound(p: int, n_max: int) -> BinomialSweepSummary:
    """Check the norm bound for every 2 <= N <= n_max and 0 <= K <= N-2."""
    start = time.monotonic()
    summary = BinomialSweepSummary(p, n_max)
    wt = _digit_sum_table(n_max, p)
    vN = 0
    for N in range(2, n_max + 1):
        vN = digit_padic_valuation(N, p)
        wtN = wt[N]
        for K in range(0, N - 1):
            v = (wt[K] + wt[N - K] - wtN) // (p - 1)
            lhs = -v + 1 - (N - K)
            rhs = -vN
            summary.pairs_checked += 1
            if lhs > rhs:
                summary.violations.append((N, K))
            elif lhs == rhs:
                summary.equalities.append((N, K))
    summary.elapsed_seconds = time.monotonic() - start
    return summary


def sweep_valuation_agreement(p: int, n_max: int) -> tuple[int, list[tuple[int, int]]]:
    """Compare the digit-sum and factorial-valuation routes exhaustively.

    Returns (pairs checked, mismatches).  The two tables are built by the
    two independent algorithms; no helper is shared between them.
    """
    wt = _digit_sum_table(n_max, p)
    vfact = _factorial_valuation_table(n_max, p)
    mismatches = []
    checked = 0
    for n in range(0, n_max + 1):
        wtn = wt[n]
        vn = vfact[n]
        for k in range(0, n + 1):
            checked += 1
            kummer = (wt[k] + wt[n - k] - wtn) // (p - 1)
            legendre = vn - vfact[k] - vfact[n - k]
            if kummer != legendre:
                mismatches.append((n, k))
    return checked, mismatches


def _digit_sum_table(n_max: int, p: int) -> list[int]:
    table = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        table[n] = table[n // p] + n % p
    return table


def _factorial_valuation_table(n_max: int, p: int) -> list[int]:
    table = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        # v_p(n!) = v_p((n-1)!) + v_p(n), with v_p(n) accumulated directly
        v = 0
        m = n
        while m % p == 0:
            m //= p
            v += 1
        table[n] = table[n - 1] + v
    return table
