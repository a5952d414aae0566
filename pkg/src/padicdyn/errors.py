"""Exception hierarchy shared by all padicdyn modules.

``InternalInconsistency`` is special: it signals that a computation
contradicted a fact that is mathematically guaranteed, which can only be
an implementation bug.  The command line front end maps it to its own
exit code so such failures are never confused with ordinary FAIL
verdicts.
"""

from __future__ import annotations


class PadicDynError(Exception):
    """Base class for all library errors."""


class PrimeMismatch(PadicDynError):
    """Operands built over different primes were combined."""


class DivisionByZero(PadicDynError):
    """Division (or negative power) of a zero p-adic value."""


class PrecisionExhausted(PadicDynError):
    """A result is indistinguishable from 0 at the working precision."""


class RangeError(PadicDynError):
    """An integer argument is outside its documented range."""


class ParseError(PadicDynError):
    """Malformed textual input (rational, p-adic literal, domain spec)."""


class HypothesisFailed(PadicDynError):
    """A root lift was requested from a seed that fails its certificate."""


class NoConvergence(PadicDynError):
    """An iteration did not converge within its budget (defensive)."""


class NoRootInRegion(PadicDynError):
    """No root seed exists in the requested region."""


class DomainNotInvariant(PadicDynError):
    """A reduced map leaves its declared domain."""


class SizeGuard(PadicDynError):
    """A requested table would exceed the configured size limit."""


class PreconditionViolated(PadicDynError):
    """Arguments violate a documented precondition."""


class RegimeMismatch(PadicDynError):
    """A verifier was invoked on parameters outside its regime."""


class ZeroParameter(PadicDynError):
    """The family parameter a must be nonzero."""


class NotACycle(PadicDynError):
    """The residues passed as a cycle are not a cycle of the reduced map."""


class InternalInconsistency(PadicDynError):
    """A mathematically guaranteed invariant failed: implementation bug."""
