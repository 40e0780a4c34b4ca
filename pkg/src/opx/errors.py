"""Exception types raised by the library."""

__all__ = [
    "OpxError",
    "ParameterOutOfRange",
    "NotPositiveDefinite",
    "ShiftInsideSupport",
    "KernelUndefined",
    "IteratedUndefined",
    "DegenerateDenominator",
    "EvalAtShift",
    "PoleAtSample",
    "ConstraintViolated",
    "InvalidAlphas",
    "ZeroDenominator",
    "NonConvergent",
    "Divergent",
]


class OpxError(Exception):
    """Base class for all library-specific errors."""


class ParameterOutOfRange(OpxError):
    """A family parameter lies outside its positive-definite range."""


class NotPositiveDefinite(OpxError):
    """A recurrence coefficient lambda_n <= 0 where positivity is required."""


class ShiftInsideSupport(OpxError):
    """A shift point sits inside the support where the integrand is singular."""


class KernelUndefined(OpxError):
    """Some P_j(k) vanishes, so the kernel sequence at k does not exist."""


class IteratedUndefined(OpxError):
    """A cross sum of the iterated kernel construction vanishes."""


class DegenerateDenominator(OpxError):
    """A transformation coefficient has a vanishing denominator."""


class EvalAtShift(OpxError):
    """Evaluation point coincides with the shift where no stable branch exists."""


class PoleAtSample(OpxError):
    """A sample point hits a pole of a rational recovery combination."""


class ConstraintViolated(OpxError):
    """Supplied coefficient sequences do not satisfy the required constraint."""


class InvalidAlphas(OpxError):
    """The trailing mixing coefficient alpha_l is zero."""


class ZeroDenominator(OpxError):
    """A continued-fraction denominator vanished beyond the tiny-floor rescue."""


class NonConvergent(OpxError):
    """Two continued-fraction passes disagree at the depth cap."""


class Divergent(OpxError):
    """A non-terminating hypergeometric series was requested outside |z| < 1."""
