"""Exception hierarchy shared by every module."""


class PartraceError(Exception):
    """Base class for all library errors."""


class DimensionError(PartraceError, ValueError):
    """Operand shapes are incompatible with the operation."""


class DomainError(PartraceError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NumericError(PartraceError, ArithmeticError):
    """An iterative routine failed to converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class HypothesisError(PartraceError, ValueError):
    """The input does not satisfy the hypotheses of the inequality being checked.

    Distinct from a violation: a failed precondition never counts as a
    counterexample.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = dict(details or {})


class GenerationError(PartraceError, RuntimeError):
    """A random instance could not be brought into its hypothesis class."""


class MatrixIOError(PartraceError, OSError):
    """A matrix file is malformed or unreadable."""


class UsageError(PartraceError, ValueError):
    """Invalid harness configuration or command line."""
