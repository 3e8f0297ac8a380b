"""Exception hierarchy shared by the library and the command line."""


class LandauError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(LandauError, ValueError):
    """An input violates a documented precondition."""


class ComputationError(LandauError, ArithmeticError):
    """A numerical routine failed to deliver a trustworthy result."""


class QuadratureBudgetExceeded(ComputationError):
    """Adaptive quadrature ran out of subdivisions before meeting its tolerance.

    The best available estimate is kept on the exception so callers can
    decide whether it is good enough.
    """

    def __init__(self, message, estimate=None, abs_error=None):
        super().__init__(message)
        self.estimate = estimate
        self.abs_error = abs_error


class StepUnderflow(ComputationError):
    """Finite-difference step too small to move the abscissa."""


class NegativeEigenvalue(ComputationError):
    """Grid eigenvalue below zero beyond the discretization tolerance."""
