"""Exception and warning types shared across the package."""


class StripLabError(Exception):
    """Base class for all striplab errors."""


class NonConvergence(StripLabError):
    """Quadrature refinement exhausted without meeting the tolerance.

    Carries the best value obtained and its error estimate so callers can
    decide whether the partial result is still usable.
    """

    def __init__(self, message, value=None, estimate=None):
        super().__init__(message)
        self.value = value
        self.estimate = estimate


class PoleError(StripLabError):
    """Evaluation requested at a pole of the function."""


class SingularFactor(StripLabError):
    """A denominator factor is too close to zero for a stable result."""


class EigenFailure(StripLabError):
    """An eigenvalue solver failed to converge."""


class ZeroVector(StripLabError):
    """A Rayleigh quotient was requested for the zero vector."""


class SingularEigenvalue(StripLabError):
    """Matrix-function evaluation blocked by a (near-)singular or
    defective spectrum."""


class SingularResolvent(StripLabError):
    """The resolvent system (I +/- i y J) is numerically singular."""


class OnRealAxis(StripLabError):
    """Cauchy-type integral requested on (or too close to) the real axis."""


class DenominatorNearRealAxis(StripLabError):
    """A curve denominator y -/+ L(s) passes within tolerance of the
    positive real axis."""


class BoundaryTooCloseToZero(StripLabError):
    """A winding contour could not be inflated away from a zero."""


class NoConvergence(StripLabError):
    """Newton refinement did not converge."""


class DerivativeUnderflow(StripLabError):
    """The (envelope-normalized) derivative at a located zero is so small
    that simplicity cannot be certified."""


class TruncationWarning(UserWarning):
    """The integrand is not negligible at the truncation endpoints."""


class IllConditionedWarning(UserWarning):
    """An eigenvector basis is ill conditioned; results are returned but
    should be treated with suspicion."""
