"""Level-by-level dynamics of polynomials on Z_p.

A polynomial f with p-adic integer coefficients induces a map on the finite
ring Z/p**n for every level n; cycles of those induced maps organize the
dynamics of f on Z_p.  For a k-cycle sigma at level n, with g = f**k and x a
point of the cycle, the classifying data are

    alpha_n(x) = g'(x)            A_n = v_p(alpha_n - 1)
    beta_n(x)  = (g(x) - x)/p**n  B_n = v_p(beta_n)

and exactly one of four behaviors holds:

    grows            alpha = 1 (mod p), beta != 0 (mod p)
    splits           alpha = 1 (mod p), beta  = 0 (mod p)
    grows tails      alpha = 0 (mod p)
    partially splits otherwise

Lifting a cycle to level n+1 follows a rigid pattern (single full-length
lift for a growing cycle, p same-length lifts for a splitting one, a single
same-length lift plus tails for grows-tails, and for a partial split one
same-length partial lift plus (p-1)/d lifts of length k*d where d is the
multiplicative order of alpha mod p).  Every lift computed here is validated
against that pattern and against the growth-stability facts; a violation
raises InternalInconsistency because it can only mean an arithmetic bug.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    DomainNotInvariant,
    InternalInconsistency,
    NoConvergence,
    NotACycle,
    SizeGuard,
)
from .geometry import ResidueSet
from .padic import PadicNumber, valuation_int
from .polynomials import PadicPolynomial, _horner

TABLE_SIZE_LIMIT = 10_000_000

#: Default exploration depths keeping full level tables around 10**6 states.
DEFAULT_DEPTHS = {2: 12, 3: 8, 5: 6}


def default_depth(p: int) -> int:
    return DEFAULT_DEPTHS.get(p, 4)


class CycleClass(enum.Enum):
    GROWS = "grows"
    SPLITS = "splits"
    GROWS_TAILS = "grows-tails"
    PARTIALLY_SPLITS = "partially-splits"


@dataclass(frozen=True)
class CycleRecord:
    """A classified cycle of the level-n induced map.

    ``elements`` follow the orbit order, rotated to start at the smallest
    residue.  ``A_n``/``B_n`` are valuations computed at that representative;
    None means the quantity vanished to the full working headroom.
    """

    prime: int
    level: int
    elements: tuple[int, ...]
    alpha_mod_p: int
    beta_mod_p: int
    A_n: Optional[int]
    B_n: Optional[int]
    cycle_class: CycleClass

    @property
    def length(self) -> int:
        return len(self.elements)

    def ball_set(self) -> ResidueSet:
        """The invariant compact open set underneath the cycle."""
        return ResidueSet.build(self.prime, [(x, self.level) for x in self.elements])

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "length": self.length,
            "elements": list(self.elements),
            "alpha_mod_p": self.alpha_mod_p,
            "beta_mod_p": self.beta_mod_p,
            "A_n": self.A_n,
            "B_n": self.B_n,
            "class": self.cycle_class.value,
        }


@dataclass(frozen=True)
class LevelMap:
    """The induced map of f on the level-n residues of an invariant domain."""

    prime: int
    level: int
    domain: ResidueSet
    residues: tuple[int, ...]
    table: dict[int, int]
    poly: PadicPolynomial


def build_level_map(f: PadicPolynomial, domain: ResidueSet, n: int) -> LevelMap:
    """Tabulate f on domain residues mod p**n, checking invariance."""
    p = f.prime
    if domain.prime != p:
        raise DomainNotInvariant("domain prime differs from polynomial prime")
    if domain.residue_count(n) > TABLE_SIZE_LIMIT:
        raise SizeGuard(f"level-{n} table would hold {domain.residue_count(n)} entries")
    residues = domain.residues(n)
    mod = p**n
    reduced = f.reduced_coefficients(n)
    allowed = set(residues)
    table: dict[int, int] = {}
    for r in residues:
        img = _horner(reduced, r, mod)
        if img not in allowed:
            raise DomainNotInvariant(
                f"f({r}) = {img} mod {p}^{n} leaves the domain {domain.spec_string()}"
            )
        table[r] = img
    return LevelMap(p, n, domain, tuple(residues), table, f)


def functional_graph_cycles(table: dict[int, int]) -> tuple[list[list[int]], dict[int, tuple[int, int]]]:
    """Cycles of a functional graph plus tail data.

    Returns (cycles, tails) where each cycle is in orbit order starting at
    its smallest element, and tails maps each non-cycle node to
    (cycle index, steps until the orbit enters the cycle).
    """
    color: dict[int, int] = {}
    entry: dict[int, tuple[int, int]] = {}
    cycles: list[list[int]] = []
    ON_PATH = -1
    for start in table:
        if start in color:
            continue
        path: list[int] = []
        x = start
        while x not in color:
            color[x] = ON_PATH
            path.append(x)
            x = table[x]
        if color[x] == ON_PATH:
            i = path.index(x)
            cyc = path[i:]
            m = cyc.index(min(cyc))
            cyc = cyc[m:] + cyc[:m]
            ci = len(cycles)
            cycles.append(cyc)
            for node in cyc:
                color[node] = ci
                entry[node] = (ci, 0)
            tail_part = path[:i]
        else:
            ci = color[x]
            tail_part = path
        for node in reversed(tail_part):
            color[node] = ci
            entry[node] = (ci, entry[table[node]][1] + 1)
    tails = {node: info for node, info in entry.items() if info[1] > 0}
    return cycles, tails


def classify_cycle(f: PadicPolynomial, cycle: tuple[int, ...] | list[int], n: int,
                   headroom: int = 8) -> CycleRecord:
    """Classify a cycle of the level-n map, verifying it really is one."""
    p = f.prime
    k = len(cycle)
    if k == 0:
        raise NotACycle("empty cycle")
    work = n + max(headroom, 2)
    mod = p**work
    modn = p**n
    if len({x % modn for x in cycle}) != k:
        raise NotACycle("cycle elements must be distinct residues at this level")

    # Verify the cyclic orbit structure while walking f once around.
    reduced = f.reduced_coefficients(work)
    x = cycle[0] % mod
    seen = [x % modn]
    cur = x
    for i in range(k):
        cur = _horner(reduced, cur, mod)
        expected = cycle[(i + 1) % k] % modn
        if cur % modn != expected:
            raise NotACycle(
                f"f({cycle[i]}) = {cur % modn} mod {p}^{n}, expected {expected}"
            )

    g_val, alpha, _ = f.iterate_mod(x, k, work, derivatives=1)
    diff = (g_val - x) % mod
    if diff % modn != 0:
        raise NotACycle("g(x) - x not divisible by p**n despite cycle check")
    beta = diff // modn % p ** (work - n)

    alpha_mod = alpha % p
    beta_mod = beta % p
    am1 = (alpha - 1) % mod
    A_n = valuation_int(am1, p) if am1 else None
    B_n = valuation_int(beta, p) if beta else None

    if alpha_mod == 1 and beta_mod != 0:
        cls = CycleClass.GROWS
    elif alpha_mod == 1:
        cls = CycleClass.SPLITS
    elif alpha_mod == 0:
        cls = CycleClass.GROWS_TAILS
    else:
        cls = CycleClass.PARTIALLY_SPLITS

    m = cycle.index(min(cycle))
    canonical = tuple(cycle[m:]) + tuple(cycle[:m])
    return CycleRecord(p, n, canonical, alpha_mod, beta_mod, A_n, B_n, cls)


def cycles_at_level(level_map: LevelMap, headroom: int = 8) -> tuple[list[CycleRecord], dict[int, tuple[int, int]]]:
    """All classified cycles of the induced map, plus pre-periodic tails."""
    raw, tails = functional_graph_cycles(level_map.table)
    records = [classify_cycle(level_map.poly, tuple(c), level_map.level, headroom) for c in raw]
    return records, tails


def _order_mod_p(a: int, p: int) -> int:
    """Multiplicative order of a unit modulo p."""
    if a % p == 0:
        raise InternalInconsistency("order of a non-unit requested")
    x = a % p
    d = 1
    while x != 1:
        x = x * a % p
        d += 1
        if d > p:
            raise InternalInconsistency("order computation ran away")
    return d


def second_derivative_mismatch(f: PadicPolynomial, rec: CycleRecord) -> bool:
    """For p = 3, level 1 growing cycles: does beta differ from g''/2 mod 3?

    True means the unique lift grows; False means it splits.
    """
    p = rec.prime
    if p != 3 or rec.level != 1 or rec.cycle_class is not CycleClass.GROWS:
        raise InternalInconsistency("criterion applies to growing level-1 cycles at p=3 only")
    work = rec.level + 8
    mod = p**work
    x = rec.elements[0]
    g_val, _, g2 = f.iterate_mod(x, rec.length, work, derivatives=2)
    beta = (g_val - x) % mod // p**rec.level
    half_g2 = g2 * pow(2, -1, mod) % mod
    return (beta - half_g2) % p != 0


def lift_cycles(f: PadicPolynomial, rec: CycleRecord, headroom: int = 8,
                ) -> tuple[list[CycleRecord], dict[int, tuple[int, int]]]:
    """Cycles of the level-(n+1) map over the balls of ``rec``.

    The result is validated against the rigid lift pattern; tails appear
    only over grows-tails cycles.  Any deviation raises
    InternalInconsistency.
    """
    p, n, k = rec.prime, rec.level, rec.length
    modn = p**n
    mod = p ** (n + 1)
    reduced = f.reduced_coefficients(n + 1)
    nodes = [x + j * modn for x in rec.elements for j in range(p)]
    allowed = set(nodes)
    table = {}
    for r in nodes:
        img = _horner(reduced, r, mod)
        if img not in allowed:
            raise InternalInconsistency(
                f"lift of cycle {rec.elements} is not closed at level {n + 1}"
            )
        table[r] = img
    raw, tails = functional_graph_cycles(table)
    children = [classify_cycle(f, tuple(c), n + 1, headroom) for c in raw]
    children.sort(key=lambda c: c.elements)
    _validate_lift_pattern(f, rec, children, tails)
    return children, tails


def _validate_lift_pattern(f: PadicPolynomial, parent: CycleRecord,
                           children: list[CycleRecord], tails: dict) -> None:
    p, n, k = parent.prime, parent.level, parent.length
    cls = parent.cycle_class

    def fail(msg: str) -> None:
        raise InternalInconsistency(
            f"lift pattern violated over {cls.value} cycle {parent.elements} "
            f"at level {n}: {msg}"
        )

    lengths = sorted(c.length for c in children)
    if cls is CycleClass.GROWS:
        if lengths != [p * k] or tails:
            fail(f"expected one lift of length {p * k}, got lengths {lengths}, {len(tails)} tails")
        if children[0].cycle_class not in (CycleClass.GROWS, CycleClass.SPLITS):
            fail(f"full-length lift must grow or split, got {children[0].cycle_class.value}")
        if (p >= 5 or (p == 3 and n >= 2)) and children[0].cycle_class is not CycleClass.GROWS:
            fail("a growing cycle in the stable range produced a non-growing lift")
        if p == 3 and n == 1:
            expect_grow = second_derivative_mismatch(f, parent)
            got_grow = children[0].cycle_class is CycleClass.GROWS
            if expect_grow != got_grow:
                fail("second-derivative growth criterion disagrees with the computed lift")
    elif cls is CycleClass.SPLITS:
        if lengths != [k] * p or tails:
            fail(f"expected {p} lifts of length {k}, got lengths {lengths}, {len(tails)} tails")
        bad = [c.cycle_class for c in children if c.cycle_class not in (CycleClass.GROWS, CycleClass.SPLITS)]
        if bad:
            fail(f"split lifts must grow or split, got {[b.value for b in bad]}")
    elif cls is CycleClass.GROWS_TAILS:
        if lengths != [k]:
            fail(f"expected a single lift of length {k}, got lengths {lengths}")
        if children[0].cycle_class is not CycleClass.GROWS_TAILS:
            fail(f"single lift must grow tails, got {children[0].cycle_class.value}")
        if len(tails) != (p - 1) * k:
            fail(f"expected {(p - 1) * k} tail nodes, got {len(tails)}")
    else:  # PARTIALLY_SPLITS
        d = _order_mod_p(parent.alpha_mod_p, p)
        same = [c for c in children if c.length == k]
        longer = [c for c in children if c.length == k * d]
        if tails or len(same) != 1 or len(longer) != (p - 1) // d or len(children) != 1 + (p - 1) // d:
            fail(
                f"expected 1 lift of length {k} and {(p - 1) // d} of length {k * d}, "
                f"got lengths {lengths}, {len(tails)} tails"
            )
        if same[0].cycle_class is not CycleClass.PARTIALLY_SPLITS:
            fail("same-length lift of a partial split must partially split")
        bad = [c.cycle_class for c in longer if c.cycle_class not in (CycleClass.GROWS, CycleClass.SPLITS)]
        if bad:
            fail(f"length-{k * d} lifts must grow or split, got {[b.value for b in bad]}")


def growth_certificate(f: PadicPolynomial, rec: CycleRecord) -> Optional[str]:
    """A reason why a growing cycle keeps growing at every deeper level.

    Growing cycles are stable for p >= 5 at any level and for p >= 3 from
    level 2 on; at p = 3, level 1 the second-derivative criterion decides.
    For p = 2 there is no such certificate and None is returned.
    """
    if rec.cycle_class is not CycleClass.GROWS:
        return None
    p, n = rec.prime, rec.level
    if p >= 5:
        return "stable-growth"
    if p == 3 and n >= 2:
        return "stable-growth"
    if p == 3 and n == 1:
        if second_derivative_mismatch(f, rec):
            return "stable-growth-after-level-1-criterion"
        return None
    return None


def minimality_check(f: PadicPolynomial, domain: ResidueSet, n_max: int) -> list[bool]:
    """Level-by-level single-cycle test on an invariant domain.

    Entry n-1 is True iff the level-n induced map is one cycle covering
    every residue of the domain; the subsystem is minimal iff this holds at
    every level, so all-True certifies minimality up to depth n_max.
    """
    out = []
    for n in range(1, n_max + 1):
        m = build_level_map(f, domain, n)
        raw, tails = functional_graph_cycles(m.table)
        out.append(not tails and len(raw) == 1 and len(raw[0]) == len(m.residues))
    return out


def is_minimal_to_depth(f: PadicPolynomial, domain: ResidueSet, n_max: int) -> bool:
    """Single verdict wrapper; a non-invariant domain is never minimal."""
    try:
        return all(minimality_check(f, domain, n_max))
    except DomainNotInvariant:
        return False


@dataclass(frozen=True)
class BasinReport:
    """A located attracting periodic orbit and evidence of attraction."""

    cycle: CycleRecord
    periodic_orbit: tuple[PadicNumber, ...]
    precision: int
    residue_orbit: tuple[int, ...]
    samples_checked: int
    max_periods: int

    @property
    def periodic_point(self) -> PadicNumber:
        return self.periodic_orbit[0]


def _newton_periodic_point(f: PadicPolynomial, rec: CycleRecord, precision: int) -> int:
    """Residue mod p**precision of the k-periodic point inside the cycle balls.

    Requires alpha_n - 1 to be a unit (grows-tails or partial splits), which
    makes x -> x - (g(x) - x)/(g'(x) - 1) a contraction.
    """
    p, k, n = rec.prime, rec.length, rec.level
    work = precision + 2
    mod = p**work
    x = rec.elements[0]
    for _ in range(4 * work + 8):
        g_val, alpha, _ = f.iterate_mod(x, k, work, derivatives=1)
        diff = (g_val - x) % mod
        if diff == 0:
            break
        denom = (alpha - 1) % mod
        if denom % p == 0:
            raise NoConvergence("multiplier is 1 mod p; periodic point not isolated this way")
        x = (x - diff * pow(denom, -1, mod)) % mod
    else:
        raise NoConvergence("periodic point iteration exhausted its budget")
    if (x - rec.elements[0]) % p**n != 0:
        raise InternalInconsistency("periodic point left its ball during refinement")
    return x % p**precision


def grows_tails_basin(
    f: PadicPolynomial,
    rec: CycleRecord,
    precision: int = 40,
    samples: int = 20,
    rng=None,
) -> BasinReport:
    """Locate the attracting periodic orbit of a grows-tails cycle.

    Verifies f**k fixes the located point to the requested precision and
    that sampled points of the cycle balls are attracted with distances
    dropping by at least one digit per period.
    """
    if rec.cycle_class is not CycleClass.GROWS_TAILS:
        raise InternalInconsistency("basin reports require a grows-tails cycle")
    p, k, n = rec.prime, rec.length, rec.level
    work = precision + 4
    mod = p**work
    x0 = _newton_periodic_point(f, rec, work)

    gk, _, _ = f.iterate_mod(x0, k, work, derivatives=0)
    if (gk - x0) % p**precision != 0:
        raise InternalInconsistency("located point is not periodic at target precision")

    orbit = [x0]
    for _ in range(k - 1):
        orbit.append(f.iterate_mod(orbit[-1], 1, work, derivatives=0)[0])

    def as_padic(v: int) -> PadicNumber:
        r = v % p**precision
        if r == 0:
            # residue 0 to full precision: honest only if 0 is the exact point
            if f.eval_exact(0) == 0:
                return PadicNumber.zero(p)
            raise NoConvergence("periodic point vanishes to working precision but f(0) != 0")
        return PadicNumber.from_integer_residue(p, r, precision)

    rng = rng or random.Random(0)
    checked = 0
    max_periods = 0
    for _ in range(samples):
        base = rec.elements[rng.randrange(k)]
        s = (base + rng.randrange(p ** (work - n)) * p**n) % mod
        # Distance to the orbit, measured against the in-ball orbit point.
        target = next(v for v in orbit if (v - s) % p**n == 0)
        prev = _distance_valuation_mod(s, target, p, work)
        periods = 0
        cur = s
        while prev < precision:
            cur = f.iterate_mod(cur, k, work, derivatives=0)[0]
            now = _distance_valuation_mod(cur, target, p, work)
            if now <= prev:
                raise InternalInconsistency(
                    f"attraction failed: distance valuation went {prev} -> {now}"
                )
            prev = now
            periods += 1
            if periods > work + 8:
                raise NoConvergence("attraction budget exhausted")
        checked += 1
        max_periods = max(max_periods, periods)

    return BasinReport(
        rec,
        tuple(as_padic(v) for v in orbit),
        precision,
        tuple(v % p**precision for v in orbit),
        checked,
        max_periods,
    )


def _distance_valuation_mod(x: int, y: int, p: int, work: int) -> int:
    d = (x - y) % p**work
    return valuation_int(d, p) if d else work


# -- bounded-depth minimal decomposition -------------------------------------


@dataclass(frozen=True)
class Component:
    kind: str  # "minimal" | "attracting" | "indifferent-point"
    ident: str
    support: ResidueSet
    level: int
    certificate: str
    certified: bool
    cycle: CycleRecord
    periodic_orbit: tuple[int, ...] = ()


@dataclass
class DecompositionReport:
    """Bounded-depth decomposition of an invariant domain.

    ``minimal_components`` may be certified (a growth-stability or split-
    schedule argument extends the observation to every level) or candidates
    observed single-cycle down to the exploration depth only.  Residues of
    the depth-level state space are partitioned into component supports,
    basins, and undecided.
    """

    prime: int
    depth: int
    domain: ResidueSet
    minimal_components: list[Component] = field(default_factory=list)
    attracting_components: list[Component] = field(default_factory=list)
    indifferent_points: list[Component] = field(default_factory=list)
    basin_assignments: dict[int, str] = field(default_factory=dict)
    undecided: list[ResidueSet] = field(default_factory=list)
    lift_checks: int = 0

    def partition_ok(self) -> bool:
        """Supports + basins + undecided must tile the depth-level residues."""
        p = self.prime
        total = set(self.domain.residues(self.depth))
        seen: set[int] = set()
        buckets = []
        for comp in self.minimal_components + self.attracting_components:
            buckets.append(set(comp.support.residues(self.depth)))
        buckets.append(set(self.basin_assignments))
        for u in self.undecided:
            buckets.append(set(u.residues(self.depth)))
        for b in buckets:
            if b & seen:
                return False
            seen |= b
        return seen == total

    def component_of_residue(self, r: int) -> Optional[str]:
        p = self.prime
        for comp in self.minimal_components + self.attracting_components:
            if comp.support.meets_residue(r, self.depth):
                return comp.ident
        return self.basin_assignments.get(r % p**self.depth)


def minimal_decomposition(f: PadicPolynomial, domain: ResidueSet, n_max: Optional[int] = None,
                          basin_samples: int = 5) -> DecompositionReport:
    """Explore the lift tree to depth n_max and classify what it finds.

    Grows-tails cycles yield attracting periodic orbits whose ball sets are
    basins; growing cycles with a stability certificate yield certified
    minimal components; partial splits yield indifferent periodic points and
    scheduled-growth components when the split schedule is decided within
    the depth; everything else is reported honestly as a candidate or
    undecided.
    """
    p = f.prime
    depth = n_max or default_depth(p)
    report = DecompositionReport(p, depth, domain)

    level1 = build_level_map(f, domain, 1)
    records, _tails = cycles_at_level(level1)

    def ident(prefix: str, rec: CycleRecord) -> str:
        return f"{prefix}:L{rec.level}:{rec.elements[0]}"

    def register_minimal(rec: CycleRecord, certificate: str, certified: bool) -> None:
        report.minimal_components.append(
            Component("minimal", ident("M", rec), rec.ball_set(), rec.level, certificate, certified, rec)
        )

    def register_attracting(rec: CycleRecord) -> None:
        basin = grows_tails_basin(f, rec, precision=max(depth + 4, 12), samples=basin_samples)
        report.attracting_components.append(
            Component(
                "attracting",
                ident("P", rec),
                rec.ball_set(),
                rec.level,
                "tail-contraction",
                True,
                rec,
                periodic_orbit=basin.residue_orbit,
            )
        )

    def register_indifferent(rec: CycleRecord) -> None:
        x0 = _newton_periodic_point(f, rec, max(depth + 4, 12))
        orbit = [x0]
        for _ in range(rec.length - 1):
            orbit.append(f.iterate_mod(orbit[-1], 1, max(depth + 4, 12), derivatives=0)[0])
        report.indifferent_points.append(
            Component(
                "indifferent-point",
                ident("Q", rec),
                rec.ball_set(),
                rec.level,
                "unit-multiplier-center",
                True,
                rec,
                periodic_orbit=tuple(orbit),
            )
        )

    def descend(rec: CycleRecord, schedule: Optional[int], inside_component: bool,
                seen_partial: bool) -> None:
        """Walk the lift tree below rec.

        ``schedule`` is the number of split generations still promised for
        this very cycle by a partial-split schedule: it must split while the
        count is positive and grow forever once it reaches zero.
        ``seen_partial`` suppresses duplicate registration of the periodic
        point a partial chain nests down to.
        """
        cls = rec.cycle_class
        if cls is CycleClass.GROWS_TAILS:
            if not inside_component:
                register_attracting(rec)
            return  # the single lift grows tails again; nothing new below

        if schedule is not None:
            if schedule > 0 and cls is not CycleClass.SPLITS:
                raise InternalInconsistency(
                    f"split schedule promised a split at level {rec.level}, got {cls.value}"
                )
            if schedule == 0:
                if cls is not CycleClass.GROWS:
                    raise InternalInconsistency(
                        f"split schedule promised growth at level {rec.level}, got {cls.value}"
                    )
                if not inside_component:
                    register_minimal(rec, "partial-split-schedule", certified=True)
                    inside_component = True
                schedule = None

        if cls is CycleClass.GROWS and not inside_component and schedule is None:
            cert = growth_certificate(f, rec)
            if cert is not None:
                register_minimal(rec, cert, certified=True)
                inside_component = True

        if cls is CycleClass.PARTIALLY_SPLITS and not inside_component and not seen_partial:
            register_indifferent(rec)
            seen_partial = True

        if rec.level >= depth:
            if not inside_component:
                if cls is CycleClass.GROWS:
                    register_minimal(rec, "depth-bounded", certified=False)
                else:
                    report.undecided.append(rec.ball_set())
            return

        children, _tails = lift_cycles(f, rec)
        report.lift_checks += 1
        next_sched = None if schedule is None else schedule - 1

        if cls is CycleClass.PARTIALLY_SPLITS:
            d = _order_mod_p(rec.alpha_mod_p, p)
            for child in children:
                if child.length == rec.length:
                    # The same-length partial lift nests toward the point
                    # already registered above.
                    descend(child, None, inside_component, seen_partial)
                else:
                    child_schedule = next_sched
                    if child_schedule is None and not inside_component:
                        A = child.A_n
                        if A is not None and A < rec.level * d:
                            child_schedule = A - 1  # splits before stable growth
                    descend(child, child_schedule, inside_component, False)
        else:
            for child in children:
                descend(child, next_sched, inside_component, seen_partial)

    for rec in records:
        descend(rec, None, False, False)

    _assign_basins(f, domain, depth, report)
    if not report.partition_ok():
        raise InternalInconsistency("decomposition buckets do not tile the domain")
    return report


def validate_lift_tree(f: PadicPolynomial, domain: ResidueSet, depth: int) -> int:
    """Classify every cycle at every level below ``depth`` and lift it.

    Every lift is validated against the rigid pattern and the growth
    stability facts inside :func:`lift_cycles`; the return value counts the
    validated lifts.  Any violation raises InternalInconsistency.
    """
    level1 = build_level_map(f, domain, 1)
    records, _ = cycles_at_level(level1)
    stack = list(records)
    checked = 0
    while stack:
        rec = stack.pop()
        if rec.level >= depth:
            continue
        children, _tails = lift_cycles(f, rec)
        checked += 1
        stack.extend(children)
    return checked


def _assign_basins(f: PadicPolynomial, domain: ResidueSet, depth: int,
                   report: DecompositionReport) -> None:
    """Walk the depth-level table; unresolved residues feed some component."""
    p = f.prime
    level_map = build_level_map(f, domain, depth)
    owner: dict[int, str] = {}
    for comp in report.minimal_components + report.attracting_components:
        for r in comp.support.residues(depth):
            owner[r] = comp.ident
    undecided_res: set[int] = set()
    for u in report.undecided:
        undecided_res.update(u.residues(depth))
    # Indifferent chains are undecided at residue granularity unless the
    # balls already belong to a registered component.
    for comp in report.indifferent_points:
        for r in comp.support.residues(depth):
            if r not in owner:
                undecided_res.add(r)
    for u in list(undecided_res):
        if u in owner:
            undecided_res.discard(u)

    report.undecided = (
        [ResidueSet.build(p, [(r, depth) for r in sorted(undecided_res)])] if undecided_res else []
    )

    memo: dict[int, Optional[str]] = {}

    def resolve(r: int) -> Optional[str]:
        path = []
        cur = r
        while True:
            if cur in memo:
                res = memo[cur]
                break
            if cur in owner:
                res = owner[cur]
                break
            if cur in undecided_res:
                res = None
                break
            path.append(cur)
            if len(path) > len(level_map.table) + 1:
                raise InternalInconsistency("basin walk failed to terminate")
            cur = level_map.table[cur]
        for node in path:
            memo[node] = res
        return res

    for r in level_map.residues:
        if r in owner or r in undecided_res:
            continue
        target = resolve(r)
        if target is None:
            undecided_res.add(r)
        else:
            report.basin_assignments[r] = target
    report.undecided = (
        [ResidueSet.build(p, [(r, depth) for r in sorted(undecided_res)])] if undecided_res else []
    )
