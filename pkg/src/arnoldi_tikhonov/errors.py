"""Exception types shared across the package."""

__all__ = [
    "ArnoldiTikhonovError",
    "InvalidInputError",
    "DimensionError",
    "ConvergenceError",
    "BreakdownError",
    "InfeasibleError",
    "DegenerateProblemError",
    "MatrixFormatError",
]


class ArnoldiTikhonovError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(ArnoldiTikhonovError, ValueError):
    pass


class DimensionError(InvalidInputError):
    pass


class ConvergenceError(ArnoldiTikhonovError, RuntimeError):
    """An iteration did not converge.

    The best available estimate is kept on ``best_estimate`` so callers can
    still decide to use it.
    """

    def __init__(self, message, best_estimate=None, iterations=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.iterations = iterations


class BreakdownError(ArnoldiTikhonovError, RuntimeError):
    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


class InfeasibleError(ArnoldiTikhonovError, ValueError):
    """The discrepancy target exceeds the norm of the projected data."""


class DegenerateProblemError(ArnoldiTikhonovError, ValueError):
    pass


class MatrixFormatError(ArnoldiTikhonovError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
