"""Exception types raised across the package."""


class SercomError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(SercomError, ValueError):
    """Operands have incompatible or invalid dimensions."""


class DefinitenessError(SercomError, ValueError):
    """A matrix is not positive definite (or not even positive semidefinite)
    where the operation requires it."""


class DomainError(SercomError, ValueError):
    """A scalar argument lies outside the domain of the operation."""


class UnsupportedError(SercomError, ValueError):
    """The requested variant or configuration is outside the supported set."""


class DegenerateError(SercomError, ValueError):
    """The computation is degenerate (zero denominator, singular information
    matrix) and no meaningful value exists."""
