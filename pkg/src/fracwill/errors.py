"""Exception types shared across the package."""


class FracwillError(Exception):
    """Base class for all package errors."""


class DomainError(FracwillError, ValueError):
    """An argument lies outside the admissible parameter range."""


class RangeError(FracwillError, ValueError):
    """An evaluation point lies outside the representable region."""


class ConfigurationError(FracwillError, ValueError):
    """Invalid configuration or discretization settings."""


class ConvergenceError(FracwillError, RuntimeError):
    """An iteration failed to reach its tolerance.

    ``last_residual`` holds the final residual, ``sequence`` any observed ladder.
    """

    def __init__(self, message, last_residual=None, sequence=None):
        super().__init__(message)
        self.last_residual = last_residual
        self.sequence = sequence


class AccuracyError(FracwillError, RuntimeError):
    """A quadrature could not certify its accuracy target."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class FoldError(FracwillError, ValueError):
    """Normal offset reaches the reach of the curve, the tube map folds."""


class SingularPointError(FracwillError, ValueError):
    """Evaluation requested at a singular point of a kernel."""
