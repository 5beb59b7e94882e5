"""Exception types shared across the package."""


class SimrankError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SimrankError):
    """Malformed graph input. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(SimrankError):
    """Invalid solver or query configuration."""


class DenseLimitError(SimrankError):
    """A dense O(n^2) code path was requested for a graph above dense_limit."""


class FormatError(SimrankError):
    """Malformed factor or dense-matrix file."""


class MetricError(SimrankError):
    """Metric undefined for the given operands (zero matrix, zero variance)."""


class NumericError(SimrankError):
    """Numerical failure inside a solver (non-finite input, eigensolver breakdown)."""


class RankCollapseWarning(UserWarning):
    """The sampled range of the iteration operator had lower numerical rank
    than requested; the basis was shrunk and the factor padded."""
