"""Splitting a probability vector into k clusters."""

import numpy as np

from ensemble.kmeans import lloyd
from ensemble.types import ClusteringResult
from utils.errors import DegeneratePartitionError, DomainError


def _check_k(x: np.ndarray, k: int) -> None:
    if x.ndim != 1:
        raise DomainError("Can only partition a 1-d vector")
    if not 2 <= k <= x.size:
        raise DomainError(f"Partition needs 2 <= k <= n={x.size}, got k={k}")


def gap_partition(x, k: int) -> ClusteringResult:
    """
    Sort x descending and cut the sorted list at its k-1 largest gaps.

    Gap ties go to the leftmost (largest-value) position. Each contiguous run
    becomes a cluster; cluster 1 holds the largest values.

    Raises:
        DomainError: If k is outside 2..n
        DegeneratePartitionError: If x has fewer than k distinct values
    """
    x = np.asarray(x, dtype=float)
    _check_k(x, k)
    order = np.argsort(-x, kind="stable")
    values = x[order]
    gaps = values[:-1] - values[1:]

    cuts = np.argsort(-gaps, kind="stable")[: k - 1]
    flat = cuts[gaps[cuts] <= 0]
    if flat.size:
        collision = float(values[flat[0]])
        raise DegeneratePartitionError(
            f"Cannot split into {k} clusters: only {np.unique(values).size} distinct values "
            f"(value {collision:.17g} repeats)",
            value=collision, k=k,
        )

    sorted_labels = 1 + np.searchsorted(np.sort(cuts), np.arange(x.size), side="left")
    labels = np.empty(x.size, dtype=int)
    labels[order] = sorted_labels
    return ClusteringResult(labels=labels, k=k, method="sca-gap")


def kmeans_partition(x, k: int, seed: int = 0, max_iter: int = 300) -> ClusteringResult:
    """Cluster the entries of x with 1-d k-means; cluster 1 has the largest mean."""
    x = np.asarray(x, dtype=float)
    _check_k(x, k)
    labels, centroids, _, _ = lloyd(x[:, None], k, seed, max_iter)
    used = np.unique(labels)
    if used.size < k:
        raise DegeneratePartitionError(f"k-means populated only {used.size} of {k} clusters", k=k)
    rank = np.empty(k, dtype=int)
    rank[np.argsort(-centroids[:, 0], kind="stable")] = np.arange(1, k + 1)
    return ClusteringResult(labels=rank[labels], k=k, method="sca-kmeans")


def split(x, k: int, splitter: str = "gap", seed: int = 0) -> ClusteringResult:
    if splitter == "gap":
        return gap_partition(x, k)
    if splitter == "kmeans":
        return kmeans_partition(x, k, seed=seed)
    raise DomainError(f"Unknown splitter {splitter!r}")
