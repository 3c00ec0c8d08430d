"""Exception types shared across the package."""


class VolconjError(Exception):
    """Base class for all package errors."""


class DomainError(VolconjError, ValueError):
    """Input outside an operation's domain (zero argument, empty sequence, ...)."""


class AmbiguousBranchError(DomainError):
    """Evaluation point sits on a branch cut and no side was requested."""


class InsufficientDataError(DomainError):
    """Not enough samples to run an estimator."""


class NumericalError(VolconjError, ArithmeticError):
    """A computation could not reach the requested accuracy."""


class PoleError(NumericalError):
    """Evaluation hit a non-removable pole; carries the offending point."""

    def __init__(self, message: str, point: complex | None = None):
        super().__init__(message)
        self.point = point
