"""Exception hierarchy shared across the package.

``ValidationError`` subclasses signal bad inputs (CLI exit code 1);
everything else derived from ``DirpeError`` signals a failure during
computation (CLI exit code 2).
"""


class DirpeError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(DirpeError, ValueError):
    """Invalid input (graph, config, or file contents)."""


class IsolatedNodeError(ValidationError):
    """Degree-normalized Laplacian requested for a graph with an isolated node."""


class CyclicGraphError(ValidationError):
    """An operation requiring a DAG received a graph with a directed cycle."""


class TooLargeError(ValidationError):
    """Input exceeds a hard size cap of an exponential-time method."""


class WireCountError(TooLargeError):
    """Exhaustive 0-1 correctness check requested for too many wires."""


class ParseError(ValidationError):
    """Mini-language syntax or semantic error, carrying a source position."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)


class SolverError(DirpeError):
    """Eigensolver failed to converge or produced residuals above tolerance."""

    def __init__(self, message, residuals=None):
        self.residuals = residuals
        super().__init__(message)


class GenerationBudgetError(DirpeError):
    """Random generation exceeded its retry budget."""


class ReorderLimitError(DirpeError):
    """Reordering enumeration would exceed the requested limit.

    Carries the exact count so callers can still report it.
    """

    def __init__(self, count, limit):
        self.count = count
        self.limit = limit
        super().__init__(f"{count} reorderings exceed limit {limit}")


class LossyBasisWarning(UserWarning):
    """Inverse GFT with a truncated basis only reconstructs a projection."""
