"""Exception types shared across the package."""

from __future__ import annotations


class FracmixError(Exception):
    """Base class for all package-specific errors."""


class PoleError(FracmixError, ValueError):
    """Gamma function evaluated at a non-positive integer."""


class ConvergenceError(FracmixError):
    """A series did not reach the requested tolerance within the term budget."""


class CancellationError(FracmixError):
    """Catastrophic cancellation that the high-precision fallback could not absorb."""


class ConstraintError(FracmixError, ValueError):
    """A parameter constraint (e.g. rho1 + rho2 = delta1) is violated."""


class QuadratureError(FracmixError):
    """Adaptive quadrature failed to converge to the requested accuracy."""


class DomainError(FracmixError, ValueError):
    """Evaluation point outside the operator's admissible interval."""


class MissingDerivativeError(FracmixError):
    """A Caputo form needs derivative samples that are unavailable and cannot
    be finite-differenced on the given grid."""


class DivisionError(FracmixError):
    """A Mittag-Leffler denominator in the reconstruction formulas vanished.

    Carries the mode index and the offending value so callers can report
    which (k, p, beta) combination is degenerate.
    """

    def __init__(self, message: str, k: int | None = None, value: float | None = None):
        super().__init__(message)
        self.k = k
        self.value = value


class SolvabilityError(FracmixError):
    """A solvability determinant is zero within tolerance (degenerate data)."""

    def __init__(self, message: str, k: int | None = None, delta: float | None = None):
        super().__init__(message)
        self.k = k
        self.delta = delta
