"""Exception taxonomy shared by every matfunc module.

Each class corresponds to one well-defined failure of a documented
precondition or postcondition; library code never raises bare Exception.
"""


class MatfuncError(Exception):
    """Base class for all matfunc errors."""


class SingularMatrix(MatfuncError):
    """A pivot fell below the relative threshold during LU elimination."""


class NoConvergence(MatfuncError):
    """An iteration hit its cap before reaching the requested tolerance."""


class DivergentSeries(MatfuncError):
    """A power series cannot be tail-certified because ||A|| >= radius."""


class ZeroVector(MatfuncError):
    """A vector that must be normalizable has (numerically) zero norm."""


class BadM(MatfuncError):
    """A register size that must be a power of two is not."""


class DegenerateBound(MatfuncError):
    """An error-bound formula was evaluated outside its region of validity."""


class SizeCap(MatfuncError):
    """A requested dense object exceeds the desk-scale size cap."""


class BadScale(MatfuncError):
    """A system scaling constant is too small to bring the norm below one."""


class ZeroFunction(MatfuncError):
    """Every retained series coefficient is zero."""


class NullImage(MatfuncError):
    """f(A) b vanishes, so the target state is undefined."""


class InfeasibleTarget(MatfuncError):
    """The accuracy target needs quadrature or truncation sizes over the cap."""


class NullProjection(MatfuncError):
    """Post-selection probability is numerically zero."""


class NormTooLarge(MatfuncError):
    """The input matrix has spectral norm above one and was not rescaled."""
