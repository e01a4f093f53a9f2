"""Symmetric Sinkhorn-Knopp balancing of consensus matrices to doubly stochastic form."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from consensus.builder import ConsensusMatrix
from core.matrix import as_sym_matrix, is_irreducible
from utils.errors import ConvergenceError, DomainError, SupportError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SupportDiagnosis:
    """Zero-pattern conditions for balancing to exist and be unique."""

    irreducible: bool
    positive_diagonal: bool

    @property
    def fully_indecomposable(self) -> bool:
        # irreducible with a positive diagonal implies full indecomposability
        return self.irreducible and self.positive_diagonal

    def describe(self) -> str:
        return (
            f"irreducible={self.irreducible} positive_diagonal={self.positive_diagonal} "
            f"fully_indecomposable={self.fully_indecomposable}"
        )


@dataclass(eq=False)
class BalancedMatrix:
    """P = D S D doubly stochastic, with d the diagonal of D (None when P was read in already balanced)."""

    P: np.ndarray
    d: Optional[np.ndarray]
    iterations: int
    residual: float
    residual_history: List[float] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.P.shape[0]


def _matrix_of(S: Union[ConsensusMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(S, ConsensusMatrix):
        return S.S
    M = as_sym_matrix(S, name="similarity matrix")
    if np.any(M < 0):
        raise DomainError("Similarity matrix has negative entries")
    return M


def check_support(S: Union[ConsensusMatrix, np.ndarray]) -> SupportDiagnosis:
    """Diagnose whether S can be balanced; never raises for a valid nonnegative matrix."""
    M = _matrix_of(S)
    return SupportDiagnosis(
        irreducible=is_irreducible(M),
        positive_diagonal=bool(np.all(np.diag(M) > 0)),
    )


def sinkhorn_knopp(
    S: Union[ConsensusMatrix, np.ndarray],
    tol: float = 1e-10,
    max_iter: int = 10_000,
    d0: Optional[np.ndarray] = None,
) -> BalancedMatrix:
    """
    Find the positive diagonal d with P = diag(d) S diag(d) doubly stochastic.

    The update ``d <- d / sqrt(d * (S d))`` rescales by the square root of the
    current row sums, so every iterate is symmetric. Iteration stops when the
    largest row-sum deviation from 1 is at most ``tol``.

    Args:
        S: Consensus matrix or symmetric nonnegative array
        tol: Row-sum tolerance (> 0)
        max_iter: Iteration cap
        d0: Optional positive starting scaling

    Returns:
        BalancedMatrix with P exactly symmetric and the zero pattern of S

    Raises:
        SupportError: If S is not fully indecomposable
        ConvergenceError: If the cap is hit above tolerance; carries the residual history
    """
    if tol <= 0:
        raise DomainError(f"Balancing tolerance must be positive, got {tol}")
    M = _matrix_of(S)
    diagnosis = check_support(M)
    if not diagnosis.fully_indecomposable:
        raise SupportError(f"Consensus matrix cannot be balanced: {diagnosis.describe()}", diagnosis=diagnosis)

    if d0 is None:
        d = 1.0 / np.sqrt(M.sum(axis=1))
    else:
        d = np.asarray(d0, dtype=float).copy()
        if d.shape != (M.shape[0],) or np.any(d <= 0):
            raise DomainError("Initial scaling must be a positive vector of order n")

    history = []
    for iteration in range(max_iter + 1):
        row_sums = d * (M @ d)
        residual = float(np.abs(row_sums - 1.0).max())
        history.append(residual)
        if residual <= tol:
            break
        if iteration == max_iter:
            raise ConvergenceError(
                f"Sinkhorn-Knopp did not reach tol={tol:g} in {max_iter} iterations (residual {residual:.3e})",
                residual_history=history,
            )
        d = d / np.sqrt(row_sums)

    # outer(d, d) is exactly symmetric, so P inherits exact symmetry from S
    P = np.outer(d, d) * M
    logger.info(f"✅ Balanced {M.shape[0]}x{M.shape[0]} matrix in {iteration} iterations (residual {residual:.2e})")
    return BalancedMatrix(P=P, d=d, iterations=iteration, residual=residual, residual_history=history)
