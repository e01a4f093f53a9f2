"""Dense symmetric matrix primitives: evolution, Jacobi eigensolver, irreducibility, permutations."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from utils.errors import DimensionError, DomainError, IterationLimitError

logger = logging.getLogger(__name__)

PROB_DRIFT_TOL = 1e-12
STOCHASTIC_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted descending, with the matching orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    sweeps: int = 0
    off_norm: float = 0.0

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True, eq=False)
class BlockPartition:
    """Assignment of indices 0..n-1 to blocks 0..k-1, every block nonempty."""

    labels: np.ndarray
    k: int = field(init=False)

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        if labels.ndim != 1 or labels.size == 0:
            raise DomainError("Block partition needs a nonempty 1-d label vector")
        k = int(labels.max()) + 1
        if labels.min() < 0 or np.any(np.bincount(labels, minlength=k) == 0):
            raise DomainError(f"Block ids must cover 0..{k - 1} with no empty block")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]], n: Optional[int] = None) -> "BlockPartition":
        """Build from explicit index lists; every index 0..n-1 must appear exactly once."""
        n = n if n is not None else sum(len(b) for b in blocks)
        labels = np.full(n, -1, dtype=int)
        for block_id, block in enumerate(blocks):
            for idx in block:
                if not 0 <= idx < n or labels[idx] != -1:
                    raise DomainError(f"Index {idx} is out of range or assigned twice")
                labels[idx] = block_id
        if np.any(labels < 0):
            missing = np.flatnonzero(labels < 0).tolist()
            raise DomainError(f"Indices {missing} are not assigned to any block")
        return cls(labels)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "BlockPartition":
        """Build from arbitrary ids; blocks are numbered in sorted id order."""
        _, inverse = np.unique(np.asarray(labels), return_inverse=True)
        return cls(inverse)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def sizes(self) -> List[int]:
        return np.bincount(self.labels, minlength=self.k).tolist()

    def members(self, block: int) -> np.ndarray:
        if not 0 <= block < self.k:
            raise DomainError(f"Block {block} does not exist (k={self.k})")
        return np.flatnonzero(self.labels == block)

    def blocks(self) -> List[np.ndarray]:
        return [self.members(b) for b in range(self.k)]

    def ordering(self) -> np.ndarray:
        """Index permutation listing block 0 first, then block 1, and so on."""
        return np.concatenate(self.blocks())

    def interchange(self, block: int) -> Tuple[np.ndarray, "BlockPartition"]:
        """
        Swap block 0 and ``block``.

        Returns:
            (perm, partition) where ``perm`` reorders indices block-contiguously with
            ``block`` first, and ``partition`` describes the permuted matrix.
        """
        order = list(range(self.k))
        order[0], order[block] = order[block], order[0]
        perm = np.concatenate([self.members(b) for b in order])
        sizes = [len(self.members(b)) for b in order]
        labels = np.repeat(np.arange(self.k), sizes)
        return perm, BlockPartition(labels)


def as_sym_matrix(M, name: str = "matrix") -> np.ndarray:
    """
    Validate a square symmetric real matrix and return it as a float array.

    Round-off asymmetry (within 1e-12 relative) is removed by averaging with the
    transpose; anything larger is rejected.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionError(f"{name} must be a nonempty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DomainError(f"{name} has non-finite entries")
    if np.array_equal(M, M.T):
        return M
    scale = max(np.abs(M).max(), 1.0)
    if np.abs(M - M.T).max() > 1e-12 * scale:
        raise DomainError(f"{name} is not symmetric")
    return (M + M.T) / 2


def stochastic_residual(P: np.ndarray) -> float:
    """Largest deviation of any row or column sum from 1."""
    return float(max(np.abs(P.sum(axis=1) - 1).max(), np.abs(P.sum(axis=0) - 1).max()))


def normalize_probability(x) -> np.ndarray:
    """Rescale a nonnegative vector to unit mass."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("Probability vector has negative entries")
    total = x.sum()
    if total <= 0:
        raise DomainError("Probability vector has zero mass")
    return x / total


def evolve(x: np.ndarray, P: np.ndarray, check: bool = True) -> np.ndarray:
    """
    One step of the evolution equation ``x_t = x_{t-1} P``.

    Args:
        x: Probability row vector of order n
        P: Doubly stochastic n x n matrix
        check: Verify that P is doubly stochastic before multiplying

    Returns:
        The next probability vector, renormalized if its mass drifted past 1e-12

    Raises:
        DimensionError: If x and P have different orders
        DomainError: If P is not doubly stochastic
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or P.shape != (x.size, x.size):
        raise DimensionError(
            f"Vector of length {x.size} cannot evolve under a {P.shape} matrix",
            expected=P.shape[0], got=x.size,
        )
    if check and stochastic_residual(P) > STOCHASTIC_TOL:
        raise DomainError("Evolution matrix is not doubly stochastic")

    y = x @ P
    mass = y.sum()
    if abs(mass - 1.0) > PROB_DRIFT_TOL:
        y = y / mass
    return y


def _jacobi_rotate(A: np.ndarray, V: Optional[np.ndarray], p: int, q: int) -> None:
    """Annihilate A[p, q] in place with one Givens rotation."""
    apq = A[p, q]
    if apq == 0.0:
        return
    app, aqq = A[p, p], A[q, q]
    theta = (aqq - app) / (2.0 * apq)
    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    col_p = A[:, p].copy()
    col_q = A[:, q].copy()
    A[:, p] = c * col_p - s * col_q
    A[:, q] = s * col_p + c * col_q
    A[p, :] = A[:, p]
    A[q, :] = A[:, q]
    A[p, p] = c * c * app - 2.0 * c * s * apq + s * s * aqq
    A[q, q] = s * s * app + 2.0 * c * s * apq + c * c * aqq
    A[p, q] = A[q, p] = 0.0

    if V is not None:
        vp = V[:, p].copy()
        vq = V[:, q].copy()
        V[:, p] = c * vp - s * vq
        V[:, q] = s * vp + c * vq


def _off_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def sym_eigen(M, tol: float = 1e-12, max_sweeps: int = 100, vectors: bool = True) -> Spectrum:
    """
    Full eigendecomposition of a symmetric matrix by row-cyclic Jacobi sweeps.

    Sweeps stop once the off-diagonal Frobenius norm falls to ``tol * ||M||_F``.

    Args:
        M: Symmetric matrix
        tol: Relative off-diagonal tolerance (> 0)
        max_sweeps: Sweep cap
        vectors: Accumulate eigenvectors

    Returns:
        Spectrum with eigenvalues sorted descending (stable among equals)

    Raises:
        DomainError: If tol is not positive
        IterationLimitError: If the sweep cap is reached; ``best`` holds the current spectrum
    """
    if tol <= 0:
        raise DomainError(f"Eigensolver tolerance must be positive, got {tol}")
    A = as_sym_matrix(M).copy()
    n = A.shape[0]
    V = np.eye(n) if vectors else None
    threshold = tol * np.linalg.norm(A)

    sweeps = 0
    off = _off_norm(A)
    while off > threshold:
        if sweeps >= max_sweeps:
            best = _sorted_spectrum(A, V, sweeps, off)
            raise IterationLimitError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})",
                best=best,
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(A, V, p, q)
        sweeps += 1
        off = _off_norm(A)
        logger.debug(f"Jacobi sweep {sweeps}: off-norm {off:.3e}")

    return _sorted_spectrum(A, V, sweeps, off)


def _sorted_spectrum(A: np.ndarray, V: Optional[np.ndarray], sweeps: int, off: float) -> Spectrum:
    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return Spectrum(
        eigenvalues=w[order],
        eigenvectors=V[:, order] if V is not None else None,
        sweeps=sweeps,
        off_norm=off,
    )


def is_irreducible(M) -> bool:
    """
    True iff the pattern graph (edge i-j where M[i, j] > 0) is connected.

    Raises:
        DomainError: If M has negative entries
    """
    M = np.asarray(M, dtype=float)
    if np.any(M < 0):
        raise DomainError("Irreducibility is only defined here for nonnegative matrices")
    n_components, _ = connected_components(csr_matrix(M > 0), directed=False)
    return n_components == 1


def validate_permutation(perm, n: int) -> np.ndarray:
    perm = np.asarray(perm, dtype=int)
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise DomainError(f"Not a permutation of 0..{n - 1}: {perm.tolist()}")
    return perm


def inverse_permutation(perm) -> np.ndarray:
    perm = validate_permutation(perm, len(perm))
    return np.argsort(perm)


def permute_sym(M, perm) -> np.ndarray:
    """Return Q M Q^T, i.e. the matrix with entry (i, j) taken from M[perm[i], perm[j]]."""
    M = np.asarray(M, dtype=float)
    perm = validate_permutation(perm, M.shape[0])
    return M[np.ix_(perm, perm)]
