"""Exception types shared across the package."""


class RingfluxError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(RingfluxError, ValueError):
    """An argument is outside its documented domain."""


class InfeasibleSectorError(RingfluxError, ValueError):
    """The requested (L, m1, m110) sector contains no configuration."""


class EnumerationBoundError(RingfluxError, ValueError):
    """Exhaustive enumeration was requested above the supported ring size."""


class NumericalFailureError(RingfluxError, RuntimeError):
    """A numerical solve did not reach the required quality.

    Carries the offending residual so callers can report it.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
