"""Consensus similarity matrices assembled from clustering ensembles."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from core.matrix import as_sym_matrix
from ensemble.types import ClusteringResult
from utils.errors import DimensionError, DomainError
from utils.matrix_io import read_matrix, write_matrix

logger = logging.getLogger(__name__)

KINDS = ("ensemble-sum", "knn", "combined", "external")


@dataclass(eq=False)
class ConsensusMatrix:
    """Symmetric nonnegative co-clustering counts.

    ``r`` is the ensemble size for ensemble sums and the neighbourhood size for
    kappa-NN matrices; in both cases it is the value on the diagonal.
    """

    S: np.ndarray
    r: int
    kind: str = "ensemble-sum"
    metadata: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        self.S = as_sym_matrix(self.S, name="consensus matrix")
        if np.any(self.S < 0):
            raise DomainError("Consensus matrix has negative entries")
        if self.kind not in KINDS:
            raise DomainError(f"Unknown consensus kind {self.kind!r}")

    @property
    def n(self) -> int:
        return self.S.shape[0]

    @property
    def total(self) -> float:
        """Sum of all entries (e^T S e)."""
        return float(self.S.sum())

    def header(self) -> Dict[str, object]:
        return {"kind": self.kind, "r": self.r, **self.metadata}


def adjacency(C: ClusteringResult) -> np.ndarray:
    """0/1 matrix with entry (i, j) = 1 iff i and j share a label; unit diagonal."""
    return np.equal.outer(C.labels, C.labels).astype(int)


def consensus_sum(ensemble: Sequence[ClusteringResult]) -> ConsensusMatrix:
    """
    Sum the adjacency matrices of an ensemble.

    Raises:
        DomainError: If the ensemble is empty
        DimensionError: If members cover different numbers of elements
    """
    if not ensemble:
        raise DomainError("Consensus needs a nonempty ensemble")
    n = ensemble[0].n
    S = np.zeros((n, n), dtype=int)
    for member in ensemble:
        if member.n != n:
            raise DimensionError(f"Ensemble mixes {n} and {member.n} elements", expected=n, got=member.n)
        S += adjacency(member)
    logger.info(f"✅ Consensus matrix built from {len(ensemble)} clusterings of {n} elements")
    return ConsensusMatrix(S=S, r=len(ensemble), kind="ensemble-sum")


def combine(Sa: ConsensusMatrix, Sb: ConsensusMatrix) -> ConsensusMatrix:
    """Entrywise sum of two consensus matrices; ensemble sizes add."""
    if Sa.n != Sb.n:
        raise DimensionError(f"Cannot combine consensus matrices of order {Sa.n} and {Sb.n}", expected=Sa.n, got=Sb.n)
    return ConsensusMatrix(S=Sa.S + Sb.S, r=Sa.r + Sb.r, kind="combined")


def upper_triangle_values(S: Union[ConsensusMatrix, np.ndarray]) -> np.ndarray:
    """Strict upper-triangle entries, n(n-1)/2 of them."""
    M = S.S if isinstance(S, ConsensusMatrix) else np.asarray(S)
    return M[np.triu_indices(M.shape[0], k=1)]


def isolated_elements(S: Union[ConsensusMatrix, np.ndarray]) -> List[int]:
    """Indices whose off-diagonal row is all zero."""
    M = S.S if isinstance(S, ConsensusMatrix) else np.asarray(S)
    off = M - np.diag(np.diag(M))
    isolated = np.flatnonzero(~np.any(off > 0, axis=1)).tolist()
    if isolated:
        logger.warning(f"⚠️ Elements {isolated} never cluster with any other element")
    return isolated


def save_consensus(path: Union[str, Path], C: ConsensusMatrix) -> Path:
    return write_matrix(path, C.S, metadata=C.header())


def load_consensus(path: Union[str, Path], r: Optional[int] = None) -> ConsensusMatrix:
    """
    Read a consensus matrix; without a header the diagonal maximum stands in for r.
    """
    S, meta = read_matrix(path)
    S = np.atleast_2d(S)
    kind = meta.pop("kind", "external")
    header_r = meta.pop("r", None)
    if r is None:
        r = int(float(header_r)) if header_r is not None else int(round(np.diag(S).max()))
    if np.allclose(S, np.round(S)):
        S = np.round(S)
    return ConsensusMatrix(S=S, r=r, kind=kind, metadata=dict(meta))
