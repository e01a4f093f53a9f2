"""Data containers shared by the ensemble generators."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from utils.errors import DomainError


@dataclass(eq=False)
class DataMatrix:
    """m attributes x n elements; column j is element j."""

    values: np.ndarray
    attribute_names: Optional[List[str]] = None
    element_names: Optional[List[str]] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise DomainError(f"Data matrix must be 2-d, got shape {self.values.shape}")
        m, n = self.values.shape
        if m < 1 or n < 2:
            raise DomainError(f"Data matrix needs m >= 1 attributes and n >= 2 elements, got {m}x{n}")
        if self.element_names is not None and len(self.element_names) != n:
            raise DomainError("element_names must have one entry per column")

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def elements(self) -> np.ndarray:
        """Elements as rows (n x m), the orientation distance routines expect."""
        return self.values.T

    def require_nonnegative(self) -> None:
        if np.any(self.values < 0):
            raise DomainError("Data matrix has negative entries")


@dataclass(eq=False)
class ClusteringResult:
    """One clustering: labels 1..k per element plus provenance."""

    labels: np.ndarray
    k: int
    method: str = "unknown"
    k_requested: Optional[int] = None
    seed: Optional[int] = None
    degenerate: bool = False
    notes: List[str] = field(default_factory=list)
    history: List[float] = field(default_factory=list)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=int)
        if self.labels.ndim != 1 or self.labels.size == 0:
            raise DomainError("Labels must be a nonempty 1-d vector")
        if self.k < 1 or self.k > self.labels.size:
            raise DomainError(f"Cluster count {self.k} outside 1..{self.labels.size}")
        if self.labels.min() < 1 or self.labels.max() > self.k:
            raise DomainError(f"Labels must lie in 1..{self.k}")

    @property
    def n(self) -> int:
        return self.labels.size

    def members(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.labels == label)

    def clusters(self) -> List[np.ndarray]:
        return [self.members(c) for c in range(1, self.k + 1) if np.any(self.labels == c)]

    def canonical(self) -> tuple:
        """Labels renumbered by first appearance; equal for equal set partitions."""
        mapping = {}
        return tuple(mapping.setdefault(int(c), len(mapping) + 1) for c in self.labels)


def same_partition(a: ClusteringResult, b: ClusteringResult) -> bool:
    """True when both results split the elements into the same sets."""
    return a.n == b.n and a.canonical() == b.canonical()


@dataclass(eq=False)
class NmfFactors:
    """A ~ W H with W (m x k) and H (k x n) nonnegative."""

    W: np.ndarray
    H: np.ndarray
    residual: float
    residual_history: List[float] = field(default_factory=list)
    iterations: int = 0
    seed: Optional[int] = None

    @property
    def k(self) -> int:
        return self.H.shape[0]
