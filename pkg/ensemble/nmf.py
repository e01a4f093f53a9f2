"""Multiplicative-update NMF (Frobenius loss) and the argmax cluster assignment."""

import logging
from typing import Optional

import numpy as np

from utils.errors import DomainError

from .types import ClusteringResult, DataMatrix, NmfFactors

logger = logging.getLogger(__name__)

EPS = 1e-12


def nmf_mu(
    A: DataMatrix,
    k: int,
    seed: Optional[int] = None,
    max_iter: int = 500,
    tol: float = 1e-6,
) -> NmfFactors:
    """
    Factor A ~ W H with the multiplicative update rules.

    Each iteration updates H then W; denominators carry a 1e-12 guard so zero
    columns stay at zero instead of producing NaN. Iteration stops after
    ``max_iter`` steps or once the relative residual change drops below ``tol``.

    Raises:
        DomainError: If A has negative entries or k >= min(m, n)
    """
    A.require_nonnegative()
    V = A.values
    m, n = V.shape
    if not 1 <= k < min(m, n):
        raise DomainError(f"NMF needs 1 <= k < min(m, n) = {min(m, n)}, got k={k}")

    rng = np.random.default_rng(seed)
    scale = np.sqrt(V.mean() / k) if V.mean() > 0 else 1.0
    W = rng.random((m, k)) * scale
    H = rng.random((k, n)) * scale

    residual = float(np.linalg.norm(V - W @ H))
    history = [residual]
    iterations = 0

    for iterations in range(1, max_iter + 1):
        H *= (W.T @ V) / (W.T @ W @ H + EPS)
        W *= (V @ H.T) / (W @ (H @ H.T) + EPS)

        new_residual = float(np.linalg.norm(V - W @ H))
        history.append(new_residual)
        change = abs(residual - new_residual) / max(residual, EPS)
        residual = new_residual
        if change < tol:
            break

    logger.debug(f"NMF k={k} seed={seed}: residual {residual:.4e} after {iterations} iterations")
    return NmfFactors(W=W, H=H, residual=residual, residual_history=history, iterations=iterations, seed=seed)


def assign_from_nmf(F: NmfFactors, k_requested: Optional[int] = None) -> ClusteringResult:
    """Element j joins the row of H with the largest entry in column j (lowest row on ties)."""
    labels = np.argmax(F.H, axis=0) + 1
    return ClusteringResult(
        labels=labels, k=F.k, method="nmf",
        k_requested=k_requested if k_requested is not None else F.k,
        seed=F.seed, history=list(F.residual_history),
    )


def nmf_cluster(
    A: DataMatrix,
    k: int,
    seed: Optional[int] = None,
    max_iter: int = 500,
    tol: float = 1e-6,
) -> ClusteringResult:
    """Factor then assign, the form ensemble members use."""
    return assign_from_nmf(nmf_mu(A, k, seed=seed, max_iter=max_iter, tol=tol), k_requested=k)
