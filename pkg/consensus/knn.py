"""Single-measure consensus from kappa-nearest-neighbour sets."""

import logging
from typing import List, Literal

import numpy as np
from scipy.spatial.distance import cdist

from ensemble.types import DataMatrix
from utils.errors import DomainError

from .builder import ConsensusMatrix

logger = logging.getLogger(__name__)

Metric = Literal["euclidean", "cosine"]
Mode = Literal["intersection", "union"]


def _distances(A: DataMatrix, metric: str) -> np.ndarray:
    if metric not in ("euclidean", "cosine"):
        raise DomainError(f"Unsupported metric {metric!r}")
    return cdist(A.elements, A.elements, metric=metric)


def neighbor_sets(A: DataMatrix, kappa: int, metric: Metric = "euclidean") -> np.ndarray:
    """
    n x n 0/1 matrix N with N[i, j] = 1 iff j is among the kappa nearest neighbours of i.

    An element is never its own neighbour; distance ties at the cut go to the
    smallest index.
    """
    n = A.n
    if not 1 <= kappa < n:
        raise DomainError(f"kappa must satisfy 1 <= kappa < n={n}, got {kappa}")
    D = _distances(A, metric)
    np.fill_diagonal(D, np.inf)
    order = np.argsort(D, axis=1, kind="stable")[:, :kappa]
    N = np.zeros((n, n), dtype=int)
    np.put_along_axis(N, order, 1, axis=1)
    return N


def knn_consensus(
    A: DataMatrix,
    kappa: int,
    metric: Metric = "euclidean",
    mode: Mode = "intersection",
) -> ConsensusMatrix:
    """
    Consensus matrix counting shared (or pooled) nearest neighbours.

    Off-diagonal entries are |N_i ∩ N_j| in intersection mode and |N_i ∪ N_j| in
    union mode; the diagonal is kappa in both.

    Raises:
        DomainError: If kappa >= n or the metric/mode is unknown
    """
    if mode not in ("intersection", "union"):
        raise DomainError(f"Unsupported kappa-NN mode {mode!r}")
    N = neighbor_sets(A, kappa, metric)
    shared = N @ N.T
    S = shared if mode == "intersection" else 2 * kappa - shared
    np.fill_diagonal(S, kappa)

    logger.info(f"✅ kappa-NN consensus built (kappa={kappa}, metric={metric}, mode={mode})")
    return ConsensusMatrix(
        S=S, r=kappa, kind="knn",
        metadata={"kappa": kappa, "metric": metric, "mode": mode},
    )


def nearest_neighbors(A: DataMatrix, target: int, m: int, metric: Metric = "euclidean") -> List[int]:
    """The m elements closest to ``target``, nearest first, lowest index on ties."""
    if not 0 <= target < A.n:
        raise DomainError(f"Target {target} outside 0..{A.n - 1}")
    if not 1 <= m < A.n:
        raise DomainError(f"m must satisfy 1 <= m < n={A.n}, got {m}")
    d = _distances(A, metric)[target]
    d[target] = np.inf
    return np.argsort(d, kind="stable")[:m].tolist()
