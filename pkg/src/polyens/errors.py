"""Exception types raised by polyens.

Every failure that callers may want to distinguish gets its own class; all
inherit from PolyensError so the CLI can map them to a single exit code.
"""


class PolyensError(Exception):
    """Base class for all polyens errors."""


class EvaluationError(PolyensError):
    """A function or kernel could not be evaluated (non-finite value,
    unsupported point, or no evaluable representation)."""


class InvalidIntervalError(PolyensError):
    """An interval was empty or reversed (alpha >= beta)."""


class DegenerateDensityError(PolyensError):
    """A density vanished identically where a draw was requested."""


class NegativityError(PolyensError):
    """A density was negative beyond the clamping tolerance."""


class PositivityViolationError(PolyensError):
    """A kernel minor or joint density was negative beyond tolerance,
    e.g. an invalid tilt."""


class CoefficientRangeError(PolyensError):
    """A recurrence coefficient outside the stored pad range was needed.
    Tables never extrapolate."""


class RankError(PolyensError):
    """A discrete measure has too few distinct atoms for the requested
    number of orthonormal polynomials."""


class OrthogonalityError(PolyensError):
    """Orthonormality drifted beyond tolerance during orthogonalization."""


class NumericalBreakdownError(PolyensError):
    """A factorization or eigensolve degenerated (zero pivot, failed
    convergence, inconsistent cross-check)."""


class ConfigError(PolyensError):
    """A JSON config failed schema validation."""
