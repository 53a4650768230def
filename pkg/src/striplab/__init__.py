"""striplab: a numerical laboratory for the critical-strip integral
G(z) = integral over (0, inf) of x^(z-1) / (e^x + 1), its kernel
decompositions, the indefinite integration operators J+/- and their
numerical ranges, the operator convolution and Fourier-inversion
identities, the comparison-curve machinery, and zero location in the
strip."""

from .errors import (BoundaryTooCloseToZero, DenominatorNearRealAxis,
                     DerivativeUnderflow, EigenFailure,
                     IllConditionedWarning, NoConvergence, NonConvergence,
                     OnRealAxis, PoleError, SingularEigenvalue,
                     SingularFactor, SingularResolvent, StripLabError,
                     TruncationWarning, ZeroVector)
from .gfunc import KernelSide, StripPoint
from .quadrule import QuadConfig, QuadratureRule

__version__ = "0.1.0"

__all__ = [
    "QuadConfig",
    "QuadratureRule",
    "StripPoint",
    "KernelSide",
    "StripLabError",
    "NonConvergence",
    "NoConvergence",
    "PoleError",
    "SingularFactor",
    "EigenFailure",
    "ZeroVector",
    "SingularEigenvalue",
    "SingularResolvent",
    "OnRealAxis",
    "DenominatorNearRealAxis",
    "BoundaryTooCloseToZero",
    "DerivativeUnderflow",
    "TruncationWarning",
    "IllConditionedWarning",
    "__version__",
]
