"""The sigmoid recruitment family on P1(Q_p) and its polynomial conjugates.

The rational map ``phi(z) = a z**N / (z**N + 1)`` is conjugate through
``z -> 1/z`` to the polynomial ``f(x) = (x**N + 1)/a``, so every dynamical
question about phi is answered on f.  The long-term behavior falls into
regimes governed by |a|_p:

* ``|a|_p > 1``: an attracting fixed point of norm 1/|a|_p captures a disk
  around 0, everything far away escapes to infinity, and an invariant
  sphere (present iff (N-1) divides v_p(a)) carries conjugated dynamics of
  a monic-unit polynomial on the unit sphere.
* ``|a|_p < 1, p odd``: either everything escapes, or the points whose
  whole orbit keeps norm 1 form an expanding repeller conjugate to a full
  shift on the fixed-point disks.
* ``|a|_2 < 1``: four subcases by the parity of N and the sizes |a|_2,
  |N|_2, including a conjugacy of the unit-sphere dynamics to a polynomial
  on Z_2.
* ``|a|_p = 1``: everything off Z_p escapes; on Z_p the level machinery of
  :mod:`padicdyn.cycles` takes over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cycles import (
    CycleClass,
    build_level_map,
    cycles_at_level,
    lift_cycles,
)
from .errors import (
    InternalInconsistency,
    PreconditionViolated,
    PrecisionExhausted,
    RangeError,
    ZeroParameter,
)
from .geometry import ResidueSet
from .padic import (
    INFINITY,
    Extended,
    PadicNumber,
    valuation_fraction,
)
from .polynomials import PadicPolynomial


@dataclass(frozen=True)
class FamilyParams:
    """Validated parameters (p, N, a) with their derived arithmetic data."""

    prime: int
    N: int
    a: Fraction
    q: int  # N = q * p**m with gcd(q, p) = 1
    m: int
    v_a: int  # v_p(a)
    a0: int  # leading digit of the unit part of a

    @property
    def unit_part(self) -> Fraction:
        """a * |a|_p as an exact rational: the unit u with a = p**v_a * u."""
        return self.a * Fraction(self.prime) ** (-self.v_a)

    def unit_digit(self, index: int) -> int:
        """Base-p digit a_index of the unit part of a."""
        u = self.unit_part
        mod = self.prime ** (index + 1)
        r = u.numerator * pow(u.denominator, -1, mod) % mod
        return r // self.prime**index


def family_params(p: int, N: int, a: Fraction | int | str) -> FamilyParams:
    from .padic import is_prime, parse_rational

    if not is_prime(p):
        raise RangeError(f"{p} is not prime")
    if N < 2:
        raise RangeError("N must be at least 2")
    if isinstance(a, str):
        a = parse_rational(a)
    a = Fraction(a)
    if a == 0:
        raise ZeroParameter("a must be nonzero")
    m, q = 0, N
    while q % p == 0:
        q //= p
        m += 1
    v_a = valuation_fraction(a, p)
    unit = a * Fraction(p) ** (-v_a)
    a0 = unit.numerator * pow(unit.denominator, -1, p) % p
    return FamilyParams(p, N, a, q, m, v_a, a0)


def family_polynomial(params: FamilyParams) -> PadicPolynomial:
    """f(x) = (x**N + 1)/a, the polynomial conjugate of the rational map."""
    inv = Fraction(1) / params.a
    return PadicPolynomial.make(params.prime, [inv] + [0] * (params.N - 1) + [inv])


def rational_map_value(params: FamilyParams, z: Fraction) -> Fraction:
    """phi(z) = a z**N / (z**N + 1), evaluated exactly (finite inputs)."""
    zN = z**params.N
    if zN + 1 == 0:
        raise RangeError("z**N = -1: the rational map sends z to infinity")
    return params.a * zN / (zN + 1)


# -- regime classification ----------------------------------------------------


REGIME_TAGS = (
    "SY1",
    "SY1-EmptySphere",
    "SY2i",
    "SY2ii",
    "SY3i",
    "SY3ii",
    "SY3iii",
    "SY3iv",
    "SY4",
)


@dataclass(frozen=True)
class RegimeVerdict:
    tag: str
    side: dict
    notes: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {"tag": self.tag, "side": dict(self.side), "notes": list(self.notes)}


def classify_regime(params: FamilyParams) -> RegimeVerdict:
    """Assign exactly one regime tag from (p, N, a)."""
    p, N, v_a = params.prime, params.N, params.v_a
    if v_a < 0:
        if (-v_a) % (N - 1) == 0:
            s = -v_a // (N - 1)
            return RegimeVerdict(
                "SY1",
                {"sphere_radius_exponent": s},
                ("invariant sphere S(0, p**s) present; unit-sphere conjugate available",),
            )
        return RegimeVerdict(
            "SY1-EmptySphere",
            {},
            ("(N-1) does not divide v_p(a): the critical sphere is empty; "
             "exactly two fixed points (infinity and the small one)",),
        )
    if v_a == 0:
        return RegimeVerdict("SY4", {}, ("every point off Z_p escapes to infinity",))
    # |a|_p < 1 from here on.
    if p == 2:
        k = v_a
        v_N = params.m
        if N % 2 == 1:
            return RegimeVerdict("SY3i", {"k": k}, ("unique finite fixed point attracts nothing; all else escapes",))
        if k >= 2:
            return RegimeVerdict("SY3ii", {"k": k}, ("everything escapes to infinity",))
        if v_N >= 2:
            return RegimeVerdict("SY3iii", {"k": k}, ("unit sphere contracts to its fixed point; all else escapes",))
        return RegimeVerdict(
            "SY3iv",
            {"k": k},
            ("unit-sphere dynamics conjugate to a polynomial on Z_2 via x = 2y + 1",),
        )
    g = math.gcd(p - 1, params.q)
    v_N = params.m
    if ((p - 1) // 2) % g == 0 and v_a > v_N:
        pinned = g >= 2 and v_a > 2 * v_N
        notes = ["expanding fixed-point disks; unit-orbit set conjugate to a full shift"]
        return RegimeVerdict(
            "SY2i",
            {"ell_formula": g, "ell_pinned": pinned, "tau": v_a - v_N},
            tuple(notes),
        )
    return RegimeVerdict("SY2ii", {"gcd": g}, ("everything escapes to infinity",))


# -- conjugated polynomials ---------------------------------------------------


def sphere_scale_exponent(params: FamilyParams) -> int:
    """s with |a|_p**(1/(N-1)) = p**s; requires (N-1) | v_p(a) and |a|_p > 1."""
    if params.v_a >= 0 or (-params.v_a) % (params.N - 1) != 0:
        raise PreconditionViolated("needs |a|_p > 1 with (N-1) dividing v_p(a)")
    return -params.v_a // (params.N - 1)


def build_sphere_polynomial(params: FamilyParams) -> PadicPolynomial:
    """The conjugate of f on its invariant sphere, rescaled to S(0, 1).

    Through pi(x) = p**s * x the restriction of f to S(0, p**s) becomes
    ``x**N / (a |a|_p) + p**s / a`` with a unit leading coefficient and a
    constant term of valuation N*s; integrality is asserted.
    """
    s = sphere_scale_exponent(params)
    p = params.prime
    abs_a = Fraction(p) ** (-params.v_a)
    lead = Fraction(1) / (params.a * abs_a)
    const = Fraction(p) ** s / params.a
    g = PadicPolynomial.make(p, [const] + [0] * (params.N - 1) + [lead])
    if not g.has_integral_coefficients():
        raise InternalInconsistency("sphere conjugate must have coefficients in Z_p")
    if valuation_fraction(lead, p) != 0 or valuation_fraction(const, p) != params.N * s:
        raise InternalInconsistency("sphere conjugate coefficient valuations are wrong")
    return g


def build_odd_units_polynomial(params: FamilyParams) -> PadicPolynomial:
    """The p = 2 conjugate of f on S(0,1) through x = 2y + 1.

    Defined when |a|_2 = 1/2 and |N|_2 = 1/2; expands to
    ``((2y+1)**N + 1 - a) / (2a)`` with coefficients in Z_2 (asserted).
    """
    p, N, a = params.prime, params.N, params.a
    if p != 2 or params.v_a != 1 or params.m != 1:
        raise PreconditionViolated("needs p = 2, |a|_2 = 1/2 and |N|_2 = 1/2")
    coeffs = [(Fraction(2) - a) / (2 * a)]
    for j in range(1, N + 1):
        coeffs.append(Fraction(math.comb(N, j) * 2**j, 1) / (2 * a))
    h = PadicPolynomial.make(p, coeffs)
    if not h.has_integral_coefficients():
        raise InternalInconsistency("odd-units conjugate must have coefficients in Z_2")
    return h


def sphere_level1_map(params: FamilyParams) -> dict[int, int]:
    """Index map of the sphere disks at level 1: j -> a0**-1 * j**N mod p.

    The invariant sphere S(0, p**s) splits into the p-1 disks of leading
    digit j; f sends the disk of index j into the disk of index
    a0**-1 j**N mod p.  Matches the level-1 reduction of the sphere
    conjugate polynomial (asserted by tests).
    """
    p = params.prime
    if p < 3:
        raise PreconditionViolated("disk indexing needs p >= 3")
    sphere_scale_exponent(params)  # validates the regime
    inv = pow(params.a0, -1, p)
    return {j: inv * pow(j, params.N, p) % p for j in range(1, p)}


# -- orbits -------------------------------------------------------------------


@dataclass
class OrbitResult:
    verdict: str  # DivergesToInfinity | ConvergesTo | EntersSphere | Undecided
    steps: int
    target_index: Optional[int] = None
    certificate: str = ""
    norm_trace: list = field(default_factory=list)
    distance_trace: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "steps": self.steps,
            "target_index": self.target_index,
            "certificate": self.certificate,
            "norm_trace": self.norm_trace[:24],
            "distance_trace": self.distance_trace[:24],
        }


def _distance_at_least(x: PadicNumber, t: PadicNumber, k: int) -> bool:
    try:
        return (x - t).valuation >= k
    except PrecisionExhausted:
        return min(x.absolute_precision, t.absolute_precision) >= k


def _distance_exponent(x: PadicNumber, t: PadicNumber) -> int:
    try:
        return (x - t).valuation
    except PrecisionExhausted:
        return min(x.absolute_precision, t.absolute_precision)


def orbit(
    params: FamilyParams,
    x0: Extended | Fraction | int,
    max_iter: int = 60,
    precision: int = 40,
    targets: Optional[list[PadicNumber]] = None,
    working_precision: Optional[int] = None,
) -> OrbitResult:
    """Iterate f with exact escape certificates and target convergence.

    Divergence is declared only by the monotone-growth criteria
    (``|x|**(N-1) > |a|`` when |a|_p > 1; ``|x| >= p`` when |a|_p <= 1;
    ``|x| <= 1/p`` when |a|_p < 1), never by a magnitude heuristic.
    Convergence means the distance to one of ``targets`` dropped to
    ``p**-precision``.  ``EntersSphere`` reports landing on the invariant
    sphere in the |a|_p > 1 regime.  ``Undecided`` is a valid outcome.
    """
    p, N, v_a = params.prime, params.N, params.v_a
    work = working_precision or (precision + max_iter * max(1, abs(v_a)) + 16)
    targets = targets or []

    if x0 is INFINITY:
        return OrbitResult("DivergesToInfinity", 0, certificate="already at infinity")
    if not isinstance(x0, PadicNumber):
        x0 = PadicNumber.from_rational(p, x0, work)

    a_padic = PadicNumber.from_rational(p, params.a, work)
    one = PadicNumber.one(p, work)
    x = x0
    result = OrbitResult("Undecided", 0)
    sphere_exists = v_a < 0 and (-v_a) % (N - 1) == 0

    for step in range(max_iter + 1):
        if x.is_zero:
            v_x: Optional[int] = None  # norm 0
            result.norm_trace.append("0")
        else:
            v_x = x.valuation
            result.norm_trace.append(-v_x)

        if v_a < 0:
            if v_x is not None and (N - 1) * v_x < v_a:
                result.verdict = "DivergesToInfinity"
                result.steps = step
                result.certificate = f"|x|^(N-1) > |a| at step {step}: norms grow monotonically"
                return result
            if v_x is not None and (N - 1) * v_x == v_a:
                result.verdict = "EntersSphere"
                result.steps = step
                result.certificate = "landed on the invariant sphere" if sphere_exists else \
                    "norm balance on an empty sphere (impossible)"
                return result
        else:
            if v_x is not None and v_x <= -1:
                result.verdict = "DivergesToInfinity"
                result.steps = step
                result.certificate = f"|x| >= p at step {step} with |a| <= 1: norms grow monotonically"
                return result
            if v_a > 0 and (v_x is None or v_x >= 1):
                result.verdict = "DivergesToInfinity"
                result.steps = step
                result.certificate = (
                    f"|x| <= 1/p at step {step} with |a| < 1: next iterate has |x| = 1/|a| >= p"
                )
                return result

        for i, t in enumerate(targets):
            d = _distance_exponent(x, t)
            result.distance_trace.append(d)
            if d >= precision:
                result.verdict = "ConvergesTo"
                result.steps = step
                result.target_index = i
                result.certificate = f"distance to target {i} at most p**-{precision}"
                return result

        if step == max_iter:
            break
        try:
            x = (x**N + one) / a_padic
        except PrecisionExhausted:
            result.verdict = "Undecided"
            result.steps = step
            result.certificate = "working precision exhausted"
            return result

    result.steps = max_iter
    result.certificate = "iteration budget exhausted"
    return result


# -- whole-sphere minimality conditions (|a|_p > 1 with invariant sphere) -----


@dataclass
class SphereMinimalityReport:
    """Two-condition test for minimality of the sphere conjugate on S(0,1).

    cond1: the level-1 reduction is one (p-1)-cycle, evaluated both by the
    direct disk-index orbit and by the discrete-log congruence; the two
    routes must agree.  cond2: that cycle grows, i.e. the return map g at 1
    has g'(1) = 1 and (g(1)-1)/p != 0 mod p, plus the second-derivative
    criterion when p = 3.  For p = 2 the system is never minimal and the
    report carries the level-2 split evidence instead.
    """

    prime: int
    minimal: bool
    cond1: Optional[dict] = None
    cond2: Optional[dict] = None
    p2_evidence: Optional[dict] = None
    generator: Optional[int] = None

    def as_dict(self) -> dict:
        return {
            "prime": self.prime,
            "minimal": self.minimal,
            "cond1": self.cond1,
            "cond2": self.cond2,
            "p2_evidence": self.p2_evidence,
            "generator": self.generator,
        }


def smallest_primitive_root(p: int) -> int:
    """Least generator of the multiplicative group mod p."""
    if p == 2:
        return 1
    factors = []
    n = p - 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise InternalInconsistency(f"no primitive root mod {p}")


def _cond1_orbit_route(params: FamilyParams) -> dict:
    """Return time of disk index 1 under the level-1 sphere map."""
    p = params.prime
    index_map = sphere_level1_map(params)
    j = 1
    first_hit = None
    for n in range(1, p):
        j = index_map[j]
        if j == 1:
            first_hit = n
            break
    return {"route": "disk-orbit", "first_return": first_hit, "holds": first_hit == p - 1}


def _cond1_arithmetic_route(params: FamilyParams, generator: int) -> dict:
    """Discrete-log form: first n with (N**n - 1)/(N - 1) * m = 0 mod p-1."""
    p, N = params.prime, params.N
    # m solves a0 * g**m = 1 mod p.
    m = 0
    acc = params.a0 % p
    while acc != 1:
        acc = acc * generator % p
        m += 1
        if m > p:
            raise InternalInconsistency("discrete log failed")
    first_hit = None
    partial = 0  # (N**n - 1)/(N - 1) mod p-1, built additively
    power = 1
    for n in range(1, p):
        partial = (partial + power) % (p - 1)
        power = power * N % (p - 1)
        if partial * m % (p - 1) == 0:
            first_hit = n
            break
    return {"route": "discrete-log", "generator": generator, "m": m,
            "first_return": first_hit, "holds": first_hit == p - 1}


def sphere_minimality_report(params: FamilyParams, generator: Optional[int] = None) -> SphereMinimalityReport:
    """Decide minimality of the sphere conjugate on the whole unit sphere."""
    p = params.prime
    g_poly = build_sphere_polynomial(params)
    units = ResidueSet.unit_sphere(p)

    if p == 2:
        level1 = build_level_map(g_poly, units, 1)
        recs, _ = cycles_at_level(level1)
        rec = recs[0]
        evidence: dict = {
            "level1_class": rec.cycle_class.value,
            "second_unit_digit_of_a": params.unit_digit(1),
        }
        if rec.cycle_class is CycleClass.GROWS:
            children, _ = lift_cycles(g_poly, rec)
            lift = children[0]
            evidence["level2_class"] = lift.cycle_class.value
            evidence["level2_beta_mod_2"] = lift.beta_mod_p
            if lift.cycle_class is not CycleClass.SPLITS:
                raise InternalInconsistency(
                    "the level-2 lift over a growing unit cycle must split at p = 2"
                )
        return SphereMinimalityReport(2, minimal=False, p2_evidence=evidence)

    gen = generator or smallest_primitive_root(p)
    orbit_route = _cond1_orbit_route(params)
    arith_route = _cond1_arithmetic_route(params, gen)
    if orbit_route["first_return"] != arith_route["first_return"]:
        raise InternalInconsistency(
            f"cond1 routes disagree: orbit {orbit_route['first_return']} vs "
            f"congruence {arith_route['first_return']}"
        )
    cond1 = {
        "holds": orbit_route["holds"],
        "orbit_route": orbit_route,
        "arithmetic_route": arith_route,
    }
    if p == 3:
        cond1["closed_form"] = {
            "N_odd": params.N % 2 == 1,
            "unit_leading_digit_is_2": params.a0 == 2,
            "holds": params.N % 2 == 1 and params.a0 == 2,
        }
        if cond1["closed_form"]["holds"] != cond1["holds"]:
            raise InternalInconsistency("closed form for cond1 at p = 3 disagrees with the orbit")

    work = 8
    mod = p**work
    g_val, alpha, g2 = g_poly.iterate_mod(1, p - 1, work, derivatives=2)
    beta = (g_val - 1) % mod // p
    cond2 = {
        "alpha_mod_p": alpha % p,
        "beta_mod_p": beta % p,
        "alpha_is_1": alpha % p == 1,
        "beta_nonzero": beta % p != 0,
    }
    cond2["holds"] = cond2["alpha_is_1"] and cond2["beta_nonzero"]
    if p == 3:
        half_g2 = g2 * pow(2, -1, mod) % mod
        cond2["beta_differs_from_half_second_derivative"] = (beta - half_g2) % p != 0
        cond2["holds"] = cond2["holds"] and cond2["beta_differs_from_half_second_derivative"]

    return SphereMinimalityReport(
        p,
        minimal=bool(cond1["holds"] and cond2["holds"]),
        cond1=cond1,
        cond2=cond2,
        generator=gen,
    )


# -- mod-3 minimal component catalog (p = 3, a = 1 mod 3) ---------------------


@dataclass(frozen=True)
class Mod3Claim:
    label: str
    sets: tuple[ResidueSet, ...]
    predicted_minimal: bool
    condition: str


@dataclass
class Mod3Prediction:
    a_mod_27: int
    N_mod_18: int
    item: Optional[int]
    attracting: Optional[str]  # 'fixed-point' | 'three-cycle' | None
    claims: list[Mod3Claim]

    def minimal_sets(self) -> list[ResidueSet]:
        out: list[ResidueSet] = []
        for c in self.claims:
            if c.predicted_minimal:
                out.extend(c.sets)
        return out

    def as_dict(self) -> dict:
        return {
            "a_mod_27": self.a_mod_27,
            "N_mod_18": self.N_mod_18,
            "item": self.item,
            "attracting": self.attracting,
            "claims": [
                {
                    "label": c.label,
                    "sets": [s.spec_string() for s in c.sets],
                    "predicted_minimal": c.predicted_minimal,
                    "condition": c.condition,
                }
                for c in self.claims
            ],
        }


def mod3_component_prediction(a: Fraction | int, N: int) -> Mod3Prediction:
    """Predicted minimal components of f on 2 + 3Z_3 for p = 3, a = 1 mod 3.

    Covers even N: the invariant ball 2 + 3Z_3 decomposes according to the
    residues of a mod 27 and N mod 18 into one of six cataloged patterns
    (each an iff).  Odd N instead yields an attracting 3-periodic orbit
    whose basin is all of Z_3.
    """
    a = Fraction(a)
    p = 3
    a27 = a.numerator * pow(a.denominator, -1, 27) % 27
    if a27 % 3 != 1:
        raise PreconditionViolated("catalog needs a = 1 mod 3")
    n18 = N % 18
    whole = ResidueSet.single_class(p, 2, 1)
    pair_2_8 = ResidueSet.build(p, [(2, 2), (8, 2)])
    pair_5_8 = ResidueSet.build(p, [(5, 2), (8, 2)])
    pair_2_5 = ResidueSet.build(p, [(2, 2), (5, 2)])
    singles = tuple(ResidueSet.single_class(p, c, 2) for c in (2, 5, 8))

    if N % 2 == 1:
        return Mod3Prediction(a27, n18, None, "three-cycle", [])

    a9 = a27 % 9
    c_item2 = a9 == 1 and n18 in (4, 16)
    c_item3 = a9 == 4 and N % 6 == 2
    c_item4 = a9 == 4 and n18 in (10, 16)
    c_item5 = a9 == 7 and n18 in (4, 10)
    c_item6 = (a27 == 7 and n18 == 2) or (a27 == 16 and n18 in (8, 14))
    c_item1 = N % 6 == 0

    claims = [
        Mod3Claim("whole-invariant-ball", (whole,), c_item3, "a=4 mod 9 and N=2 mod 6"),
        Mod3Claim("pair-2-8", (pair_2_8,), c_item2, "a=1 mod 9 and N=4,16 mod 18"),
        Mod3Claim("pair-5-8", (pair_5_8,), c_item4, "a=4 mod 9 and N=10,16 mod 18"),
        Mod3Claim("pair-2-5", (pair_2_5,), c_item5, "a=7 mod 9 and N=4,10 mod 18"),
        Mod3Claim("three-singletons", singles, c_item6,
                  "a=7 mod 27 and N=2 mod 18, or a=16 mod 27 and N=8,14 mod 18"),
    ]
    item = None
    if c_item1:
        item = 1
    elif c_item2:
        item = 2
    elif c_item3:
        item = 3
    elif c_item4:
        item = 4
    elif c_item5:
        item = 5
    elif c_item6:
        item = 6
    return Mod3Prediction(a27, n18, item, "fixed-point" if c_item1 else None, claims)
