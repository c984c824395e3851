"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class EvaluationError(ArithmeticError):
    """The integrand produced a non-finite value at a grid point."""

    def __init__(self, message: str, point: float):
        super().__init__(message)
        self.point = point


class IntegrationError(RuntimeError):
    """Adaptive integration hit its subdivision limit before reaching tol.

    The best available estimate and its achieved error bound are kept on
    the exception so callers can decide whether they are good enough.
    """

    def __init__(self, message: str, estimate: float, abs_error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.abs_error_bound = abs_error_bound


class MomentRangeError(OverflowError):
    """e**(lam * ln t_max) does not fit in a double."""
