"""Lloyd k-means with k-means++ seeding, operating on data-matrix columns."""

import logging
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from utils.errors import DomainError

from .types import ClusteringResult, DataMatrix

logger = logging.getLogger(__name__)


def kmeans_plusplus_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Pick k starting centroids from the rows of X with D^2 weighting."""
    n_samples = X.shape[0]
    centroids = np.empty((k, X.shape[1]), dtype=float)
    centroids[0] = X[rng.integers(0, n_samples)]

    for i in range(1, k):
        dist_sq = cdist(X, centroids[:i], "sqeuclidean").min(axis=1)
        total = dist_sq.sum()
        if total > 0:
            next_idx = rng.choice(n_samples, p=dist_sq / total)
        else:
            next_idx = rng.integers(0, n_samples)
        centroids[i] = X[next_idx]

    return centroids


def lloyd(X: np.ndarray, k: int, seed: Optional[int], max_iter: int):
    """
    Lloyd iterations on the rows of X.

    Returns:
        (labels 0..k-1, centroids, objective history, empty-cluster repairs)
    """
    rng = np.random.default_rng(seed)
    centroids = kmeans_plusplus_init(X, k, rng)
    history = []
    repairs = 0
    labels = None
    # squared distances at or below this are rounding noise in the centroid means
    tiny = np.finfo(float).eps * float(np.max(np.sum(X * X, axis=1)))

    for _ in range(max_iter):
        dist_sq = cdist(X, centroids, "sqeuclidean")
        new_labels = dist_sq.argmin(axis=1)
        own = dist_sq[np.arange(len(X)), new_labels]

        # Empty cluster: move its centroid onto the point farthest from its own centroid
        for j in range(k):
            if np.any(new_labels == j):
                continue
            far = int(own.argmax())
            if own[far] <= tiny:
                break
            centroids[j] = X[far]
            new_labels[far] = j
            own[far] = 0.0
            repairs += 1
            logger.debug(f"Empty cluster {j} reseeded at element {far}")

        history.append(float(own.sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels

        for j in range(k):
            mask = labels == j
            if np.any(mask):
                centroids[j] = X[mask].mean(axis=0)

    return labels, centroids, history, repairs


def kmeans(A: DataMatrix, k: int, seed: Optional[int] = None, max_iter: int = 300) -> ClusteringResult:
    """
    Cluster the elements (columns) of A into k groups.

    Args:
        A: Data matrix, columns are elements
        k: Requested cluster count, 1 <= k <= n
        seed: Seed for the k-means++ draw; equal seeds give equal results
        max_iter: Cap on Lloyd iterations

    Returns:
        ClusteringResult with labels 1..k

    Raises:
        DomainError: If k is outside 1..n
    """
    X = A.elements
    n = X.shape[0]
    if not 1 <= k <= n:
        raise DomainError(f"k-means needs 1 <= k <= n, got k={k}, n={n}")

    if k == 1 or np.all(X == X[0]):
        degenerate = k > 1
        if degenerate:
            logger.warning("⚠️ All elements identical; returning a single cluster")
        return ClusteringResult(
            labels=np.ones(n, dtype=int), k=1, method="kmeans",
            k_requested=k, seed=seed, degenerate=degenerate,
        )

    labels, _, history, repairs = lloyd(X, k, seed, max_iter)

    used = np.unique(labels)
    notes = []
    if repairs:
        notes.append(f"empty-cluster repairs={repairs}")
    if len(used) < k:
        notes.append(f"k reduced from {k} to {len(used)}")
        logger.warning(f"⚠️ k-means could only populate {len(used)} of {k} clusters")
    relabel = np.searchsorted(used, labels) + 1

    return ClusteringResult(
        labels=relabel, k=len(used), method="kmeans", k_requested=k,
        seed=seed, notes=notes, history=history,
    )
