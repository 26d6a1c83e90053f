"""Exception types shared across the package."""

from .arith import FactorizationError, NotPrimeError


class NotCoveredError(ValueError):
    """Input lies outside the residue classes a result speaks about."""


class HypothesisError(ValueError):
    """A theorem's hypothesis is not met by the given input."""


class PreconditionError(ValueError):
    pass


class TheoremViolation(AssertionError):
    """A machine check contradicted a proven identity.  Should never fire."""


class NotIntegralError(ArithmeticError):
    """A rational could not be reduced modulo M because its denominator shares a factor with M."""


__all__ = [
    "FactorizationError",
    "NotPrimeError",
    "NotCoveredError",
    "HypothesisError",
    "PreconditionError",
    "TheoremViolation",
    "NotIntegralError",
]
