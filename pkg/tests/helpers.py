"""Builders for synthetic matrices and ensembles used across the test modules."""

from typing import List, Sequence

import numpy as np

from consensus import consensus_sum
from core.matrix import is_irreducible
from ensemble import ClusteringResult


def block_stochastic(sizes: Sequence[int], eps: float) -> np.ndarray:
    """(1 - eps) blockdiag(J / n_b) + eps J / n: symmetric, doubly stochastic, b nearly uncoupled blocks."""
    n = sum(sizes)
    P = np.zeros((n, n))
    start = 0
    for size in sizes:
        P[start:start + size, start:start + size] = 1.0 / size
        start += size
    return (1.0 - eps) * P + eps / n


def random_doubly_stochastic(rng: np.random.Generator, n: int, terms: int = 5) -> np.ndarray:
    """Weighted mix of symmetrized permutation matrices, always including an n-cycle."""
    perms = [np.roll(np.arange(n), 1)] + [rng.permutation(n) for _ in range(terms)]
    weights = rng.random(len(perms)) + 0.5
    weights /= weights.sum()
    P = np.zeros((n, n))
    for w, perm in zip(weights, perms):
        Q = np.eye(n)[perm]
        P += w * (Q + Q.T) / 2.0
    return P


def random_ensemble(rng: np.random.Generator, n: int, r: int) -> List[ClusteringResult]:
    """r random labelings around a planted two-block split, redrawn until the sum is irreducible."""
    planted = np.where(np.arange(n) < n // 2, 1, 2)
    while True:
        members = []
        for _ in range(r):
            k = int(rng.integers(2, 5))
            labels = planted.copy()
            flip = rng.random(n) < 0.3
            labels[flip] = rng.integers(1, k + 1, size=flip.sum())
            _, labels = np.unique(labels, return_inverse=True)
            members.append(ClusteringResult(labels=labels + 1, k=int(labels.max()) + 1))
        if is_irreducible(consensus_sum(members).S):
            return members


