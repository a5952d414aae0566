"""Exact p-adic arithmetic and dynamics of the sigmoid recruitment family.

The library provides finite-precision arithmetic in Q_p with explicit
precision tracking, ultrametric geometry (balls, residue-class sets, the
spherical metric on the projective line), digit-sum valuations of binomial
coefficients, certified root lifting, a level-by-level cycle engine with
bounded-depth minimal decomposition, and regime analyzers plus claim
verifiers for the family phi(z) = a z**N / (z**N + 1) iterated over Q_p.
"""

from .binomials import (
    BinomialValuationRecord,
    binomial_bound_check,
    binomial_valuation,
    binomial_valuation_legendre,
    digit_sum,
    factorial_valuation,
    sweep_binomial_bound,
    sweep_valuation_agreement,
)
from .cycles import (
    BasinReport,
    CycleClass,
    CycleRecord,
    DecompositionReport,
    LevelMap,
    build_level_map,
    classify_cycle,
    cycles_at_level,
    grows_tails_basin,
    is_minimal_to_depth,
    lift_cycles,
    minimal_decomposition,
    minimality_check,
    validate_lift_tree,
)
from .errors import (
    DivisionByZero,
    DomainNotInvariant,
    HypothesisFailed,
    InternalInconsistency,
    NoConvergence,
    NoRootInRegion,
    NotACycle,
    PadicDynError,
    ParseError,
    PrecisionExhausted,
    PreconditionViolated,
    PrimeMismatch,
    RangeError,
    RegimeMismatch,
    SizeGuard,
    ZeroParameter,
)
from .family import (
    FamilyParams,
    Mod3Prediction,
    OrbitResult,
    RegimeVerdict,
    SphereMinimalityReport,
    build_odd_units_polynomial,
    build_sphere_polynomial,
    classify_regime,
    family_params,
    family_polynomial,
    mod3_component_prediction,
    orbit,
    rational_map_value,
    sphere_level1_map,
    sphere_minimality_report,
)
from .geometry import (
    Ball,
    BallRelation,
    ProjectivePoint,
    ResidueSet,
    spherical_distance,
    spherical_distance_extended,
)
from .hensel import (
    HenselReport,
    brute_force_unity_shift_roots,
    count_unity_shift_roots,
    family_fixed_points,
    hensel_lift,
    hensel_report,
    unique_seed_scan,
)
from .padic import (
    DEFAULT_PRECISION,
    INFINITY,
    PadicNumber,
    PPow,
    arith,
    distance_valuation,
    parse_padic_literal,
    parse_rational,
    reassemble_digits,
    valuation_fraction,
    valuation_int,
)
from .polynomials import PadicPolynomial
from .repeller import RepellerReport, repeller_analysis
from .report import Evidence, Report, reports_equal_ignoring_timing
from .verifiers import VERIFIER_TAGS, VerifyBudget, run_verifier

__version__ = "0.1.0"
