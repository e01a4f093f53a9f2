"""Error hierarchy shared by every stage of the clustering pipeline.

Each class carries the process exit code the CLI maps it to, so library code
raises and only the entry point decides how to terminate.
"""

from typing import Any, List, Optional, Sequence


class ClusteringError(Exception):
    """Base class for all errors raised by this project."""

    exit_code: int = 1


class DomainError(ClusteringError, ValueError):
    """Input outside the domain an operation is defined on."""

    exit_code = 2


class DimensionError(DomainError):
    """Operands whose sizes do not match."""

    def __init__(self, message: str, expected: Optional[int] = None, got: Optional[int] = None):
        super().__init__(message)
        self.expected = expected
        self.got = got


class DataFormatError(DomainError):
    """A data file that cannot be parsed into a numeric matrix."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.row = row
        self.column = column


class SupportError(ClusteringError):
    """Consensus matrix fails the balancing preconditions."""

    exit_code = 3

    def __init__(self, message: str, diagnosis: Any = None):
        super().__init__(message)
        self.diagnosis = diagnosis


class SingularityError(ClusteringError):
    """A linear system that should be nonsingular is not."""

    exit_code = 3


class DegeneratePartitionError(ClusteringError):
    """Too few distinct values to split a vector into the requested clusters."""

    exit_code = 3

    def __init__(self, message: str, value: Optional[float] = None, k: Optional[int] = None):
        super().__init__(message)
        self.value = value
        self.k = k


class BoundViolationError(ClusteringError):
    """A numeric uncoupling bound or complement property does not hold."""

    exit_code = 3

    def __init__(self, message: str, failures: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.failures: List[str] = list(failures or [])


class ConvergenceError(ClusteringError):
    """An iterative kernel hit its iteration cap above tolerance."""

    exit_code = 4

    def __init__(self, message: str, residual_history: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.residual_history: List[float] = list(residual_history or [])


class IterationLimitError(ConvergenceError):
    """Convergence failure that still carries a usable best-so-far result."""

    def __init__(self, message: str, best: Any = None, residual_history: Optional[Sequence[float]] = None):
        super().__init__(message, residual_history)
        self.best = best


class ExhaustionError(ClusteringError):
    """A search ran out of iterations or attempts without an answer."""

    exit_code = 5

    def __init__(self, message: str, trace: Any = None):
        super().__init__(message)
        self.trace = trace


class PathologicalToleranceError(ExhaustionError):
    """Random initial vectors keep landing inside the rejection tolerance."""


class StageError(ClusteringError):
    """Wraps a failure inside a named pipeline stage."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)
