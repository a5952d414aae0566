"""Root certificates, Newton lifting, and fixed points of the family map.

The certificate implemented by :func:`hensel_report` is the (s, L) family of
valuation inequalities: given F in Z_p[x] and a seed x0 in Z_p with
``F(x0) = 0 mod p**s``, a pass guarantees a unique root ``x`` of F in Z_p
with ``x = x0 mod p**(s - v_p(F'(x0)))``.  With Taylor coefficients
``c_k = F^(k)(x0) / k!`` the conditions read

    v(c_L) + v(F'(x0)) < s                      (main condition)
    v(c_k) + v(F'(x0)) - v(c_(k+1)) < s         (chain, 1 <= k <= L-1)

which for s = v(F(x0)) is the classical statement with a free derivative
order L.  Lifting proceeds by bounded digit refinement until the classical
Newton inequality ``v(F(x)) > 2 v(F'(x))`` holds, then quadratically
convergent Newton steps with a progress assertion at every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    HypothesisFailed,
    InternalInconsistency,
    NoConvergence,
    NoRootInRegion,
    PreconditionViolated,
    RangeError,
    ZeroParameter,
)
from .geometry import Ball
from .padic import PadicNumber, valuation_fraction, valuation_int
from .polynomials import PadicPolynomial

_BFS_WIDTH_LIMIT = 4096


@dataclass(frozen=True)
class ConditionItem:
    """One inequality of the certificate, with exact valuations."""

    name: str
    k: int
    lhs_valuation: Optional[int]  # None encodes +infinity (a vanishing term)
    rhs_valuation: int
    ok: bool


@dataclass(frozen=True)
class HenselReport:
    """Precondition report for one (polynomial, seed, s, L) instance."""

    prime: int
    polynomial: PadicPolynomial
    x0: Fraction
    s: int
    L: int
    root_order_ok: bool  # F(x0) = 0 mod p**s
    f_valuation: Optional[int]  # v(F(x0)), None when F(x0) = 0 exactly
    fprime_valuation: Optional[int]
    conditions: tuple[ConditionItem, ...]
    passes: bool

    def locating_ball(self) -> Ball:
        """Ball x0 + p**(s - v(F'(x0))) Z_p certified to contain the root."""
        if self.fprime_valuation is None:
            raise HypothesisFailed("F'(x0) vanishes; no locating ball")
        tau = self.s - self.fprime_valuation
        center = PadicNumber.from_rational(self.prime, self.x0, max(tau, 1) + 8)
        return Ball(self.prime, center, tau)


def _vp(value: Fraction, p: int) -> Optional[int]:
    return None if value == 0 else valuation_fraction(value, p)


def hensel_report(F: PadicPolynomial, x0: Fraction | int, L: Optional[int] = None, s: int = 1) -> HenselReport:
    """Evaluate the certificate inequalities; a report, not a judgment.

    When L is None, every order in 1..deg(F) is tried and the first passing
    report is returned (or the L=1 report if none passes).
    """
    p = F.prime
    x0 = Fraction(x0)
    if s < 1:
        raise RangeError("s must be at least 1")
    if not F.has_integral_coefficients():
        raise PreconditionViolated("certificate requires coefficients in Z_p")
    if x0 != 0 and valuation_fraction(x0, p) < 0:
        raise PreconditionViolated("seed must lie in Z_p")
    if L is None:
        first = None
        for trial in range(1, max(F.degree, 1) + 1):
            rep = hensel_report(F, x0, trial, s)
            if first is None:
                first = rep
            if rep.passes:
                return rep
        return first  # type: ignore[return-value]
    if not 1 <= L <= max(F.degree, 1):
        raise RangeError(f"L must be in 1..deg(F), got {L}")

    taylor = F.taylor_coefficients(x0)
    v = [_vp(c, p) for c in taylor]
    vF = v[0]
    vF1 = v[1] if len(v) > 1 else None
    root_ok = vF is None or vF >= s

    conditions: list[ConditionItem] = []
    vL = v[L] if L < len(v) else None
    if vF1 is None or vL is None:
        main_ok = False
        lhs_main = None
    else:
        lhs_main = vL + vF1
        main_ok = lhs_main < s
    conditions.append(ConditionItem("main", L, lhs_main, s, main_ok))
    for k in range(1, L):
        vk = v[k] if k < len(v) else None
        vk1 = v[k + 1] if k + 1 < len(v) else None
        if vF1 is None or vk is None or vk1 is None:
            ok = False
            lhs = None
        else:
            lhs = vk + vF1 - vk1
            ok = lhs < s
        conditions.append(ConditionItem("chain", k, lhs, s, ok))

    passes = root_ok and all(c.ok for c in conditions)
    return HenselReport(p, F, x0, s, L, root_ok, vF, vF1, tuple(conditions), passes)


def _residue_of(value: Fraction, p: int, n: int) -> int:
    mod = p**n
    den = value.denominator
    if den % p == 0:
        raise PreconditionViolated("value is not a p-adic integer")
    return value.numerator * pow(den, -1, mod) % mod


def hensel_lift(
    F: PadicPolynomial,
    x0: Fraction | int,
    target_precision: int,
    L: Optional[int] = None,
    s: int = 1,
    report: Optional[HenselReport] = None,
) -> PadicNumber:
    """Lift a certified seed to a root modulo p**target_precision.

    Raises HypothesisFailed when the certificate does not pass, and
    NoConvergence if Newton progress ever stalls (defensively; this cannot
    happen for a passing certificate).
    """
    p = F.prime
    if report is None:
        report = hensel_report(F, x0, L, s)
    if not report.passes:
        raise HypothesisFailed(
            f"certificate fails for seed {x0} (s={report.s}, L={report.L}); "
            f"conditions: {[ (c.name, c.k, c.ok) for c in report.conditions ]}"
        )
    x0 = Fraction(x0)
    work = target_precision + 2
    mod = p**work

    vF1_seed = report.fprime_valuation or 0
    ball_exp = max(report.s - vF1_seed, 0)

    # Bounded digit refinement until the classical Newton inequality holds.
    deriv = F.derivative()
    depth_cap = report.s + 2 * vF1_seed + 8
    level = max(ball_exp, 1)
    candidates = [_residue_of(x0, p, level)]
    for _ in range(depth_cap):
        ready = None
        for c in candidates:
            fc = F.eval_mod(c, work)
            if fc == 0:
                ready = c  # root to full working precision already
                break
            dc = deriv.eval_mod(c, work)
            vf = valuation_int(fc, p) if fc else work
            vd = valuation_int(dc, p) if dc else work
            if vf > 2 * vd:
                ready = c
                break
        if ready is not None:
            x = ready
            break
        nxt = []
        step = p**level
        for c in candidates:
            for t in range(p):
                cand = c + t * step
                if F.eval_mod(cand, level + 1) == 0:
                    nxt.append(cand)
        if not nxt:
            raise NoConvergence("seed refinement died out despite a passing certificate")
        if len(nxt) > _BFS_WIDTH_LIMIT:
            raise NoConvergence("seed refinement branched beyond the safety limit")
        candidates = nxt
        level += 1
    else:
        raise NoConvergence("classical Newton inequality never reached")

    # Quadratic Newton iterations with a progress assertion each step.
    for _ in range(4 * work + 8):
        fx = F.eval_mod(x, work)
        if fx == 0:
            break
        vf = valuation_int(fx, p)
        if vf >= target_precision:
            break
        dx = deriv.eval_mod(x, work)
        vd = valuation_int(dx, p) if dx else work
        unit = dx // p**vd
        delta = fx // p**vd * pow(unit, -1, mod) % mod
        x = (x - delta) % mod
        fx_new = F.eval_mod(x, work)
        vf_new = valuation_int(fx_new, p) if fx_new else work
        expected = min(2 * (vf - vd), work)
        if vf_new < min(vf + 1, work) or vf_new < expected:
            raise InternalInconsistency(
                f"Newton progress violated: v(F) went {vf} -> {vf_new}, expected >= {expected}"
            )
    else:
        raise NoConvergence("Newton iteration exhausted its budget")

    residue = x % p**target_precision
    if residue == 0:
        exact = F.eval_exact(Fraction(0))
        if exact == 0:
            return PadicNumber.zero(p)
        raise NoConvergence("root is 0 to working precision but F(0) != 0")
    root = PadicNumber.from_integer_residue(p, residue, target_precision)
    # Root must stay inside the certified locating ball.
    if ball_exp > 0 and (residue - _residue_of(x0, p, ball_exp)) % p**ball_exp != 0:
        raise InternalInconsistency("lifted root escaped its locating ball")
    return root


def unique_seed_scan(F: PadicPolynomial, report: HenselReport, extra_digits: int = 2) -> int:
    """Scan residues mod p**(s+extra) in the locating ball for root seeds.

    Solutions of F = 0 mod p**(s+extra) are bucketed at the locating-ball
    granularity p**(s - v(F'(x0))); a passing certificate guarantees exactly
    one bucket survives.
    """
    p = F.prime
    depth = report.s + extra_digits
    ball_exp = max(report.s - (report.fprime_valuation or 0), 0)
    base = _residue_of(Fraction(report.x0), p, ball_exp) if ball_exp else 0
    step = p**ball_exp
    granularity = p ** max(report.s - (report.fprime_valuation or 0), 1)
    buckets = set()
    for r in range(base, p**depth, step):
        if F.eval_mod(r, depth) == 0:
            buckets.add(r % granularity)
    return len(buckets)


# -- root counting for x**N + 1 = 0 mod p -----------------------------------


def count_unity_shift_roots(N: int, p: int) -> int:
    """Number of solutions of x**N + 1 = 0 mod p, by the gcd formula.

    Writing N = q * p**m with gcd(q, p) = 1: one solution for p = 2;
    for odd p there are gcd(p-1, q) solutions when that gcd divides
    (p-1)/2 and none otherwise.
    """
    if N < 1:
        raise RangeError("N must be positive")
    if p == 2:
        return 1
    m = 0
    q = N
    while q % p == 0:
        q //= p
        m += 1
    g = math.gcd(p - 1, q)
    return g if ((p - 1) // 2) % g == 0 else 0


def brute_force_unity_shift_roots(N: int, p: int) -> int:
    """Independent oracle: count residues with x**N = -1 mod p directly."""
    return sum(1 for x in range(1, p) if pow(x, N, p) == p - 1)


# -- fixed points of the family map -----------------------------------------


def family_fixed_points(p: int, N: int, a: Fraction | int, precision: int = 60) -> list[PadicNumber]:
    """All certified fixed points of x -> (x**N + 1)/a in the natural region.

    For |a|_p <= 1 the fixed points solve F(x) = x**N - a x + 1 = 0 with
    |x|_p = 1; seeds are scanned mod p and refined as needed.  For |a|_p > 1
    the unique fixed point with |x|_p = 1/|a|_p is found through the
    substitution y = a x, which turns the equation into
    (y/a)**N - y + 1 = 0 with coefficients in Z_p and a unit derivative.
    """
    a = Fraction(a)
    if a == 0:
        raise ZeroParameter("family parameter a must be nonzero")
    if N < 2:
        raise RangeError("N must be at least 2")
    v_a = valuation_fraction(a, p)

    if v_a < 0:
        sub = PadicPolynomial.make(
            p, [Fraction(1), Fraction(-1)] + [Fraction(0)] * (N - 2) + [Fraction(1) / a**N]
        )
        rep = hensel_report(sub, 1, L=1, s=1)
        if not rep.passes:
            raise InternalInconsistency("unit-derivative substitution failed its certificate")
        y0 = hensel_lift(sub, 1, precision, report=rep)
        x0 = y0 / PadicNumber.from_rational(p, a, precision)
        return [x0]

    F = PadicPolynomial.make(p, [Fraction(1), -a] + [Fraction(0)] * (N - 2) + [Fraction(1)])
    m = 0
    q = N
    while q % p == 0:
        q //= p
        m += 1

    roots: list[PadicNumber] = []
    failures: list[HenselReport] = []
    seen: set[int] = set()
    dedupe_depth = min(precision, 2 * m + 3)

    def record(root: PadicNumber) -> None:
        key = root.residue(dedupe_depth)
        if key not in seen:
            seen.add(key)
            roots.append(root)

    for r in range(p):
        if F.eval_mod(r, 1) != 0:
            continue
        rep = hensel_report(F, r, L=None, s=1)
        if rep.passes:
            record(hensel_lift(F, r, precision, report=rep))
            continue
        if m > 0:
            # Seeds need refining to s = 2 v_p(N) + 1 before the order-2
            # certificate applies; walk the residue tree up to that depth.
            s = 2 * m + 1
            cands = [r]
            for level in range(1, s):
                step = p**level
                cands = [
                    c + t * step
                    for c in cands
                    for t in range(p)
                    if F.eval_mod(c + t * step, level + 1) == 0
                ]
            found = False
            for c in cands:
                rep2 = hensel_report(F, c, L=2, s=s)
                if rep2.passes:
                    record(hensel_lift(F, c, precision, report=rep2))
                    found = True
                else:
                    failures.append(rep2)
            if found:
                continue
        failures.append(rep)

    if not roots:
        detail = "; ".join(
            f"seed {rep.x0}: " + ", ".join(f"{c.name}@{c.k}:{'ok' if c.ok else 'fail'}" for c in rep.conditions)
            for rep in failures[:4]
        )
        raise NoRootInRegion(f"no certified fixed point on the unit sphere ({detail or 'no mod-p seeds'})")

    # In the strongly expanding regime the count is pinned by the root
    # counting formula; disagreement would be an arithmetic bug.
    if p >= 3 and v_a > 0:
        v_N = valuation_int(N, p)
        g = math.gcd(p - 1, q)
        if v_a > 2 * v_N and g >= 2 and ((p - 1) // 2) % g == 0:
            expected = count_unity_shift_roots(N, p)
            if len(roots) != expected:
                raise InternalInconsistency(
                    f"fixed point count {len(roots)} != {expected} in the pinned regime"
                )
    return sorted(roots, key=lambda x: x.residue(dedupe_depth))
