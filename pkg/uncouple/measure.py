"""Uncoupling measure of a symmetric nonnegative matrix for a two-block split."""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from core.matrix import BlockPartition, as_sym_matrix, sym_eigen
from utils.errors import DomainError

logger = logging.getLogger(__name__)

BATCH = 20_000


@dataclass(eq=False)
class UncouplingReport:
    """Smallest off-diagonal-block mass fraction found for blocks of sizes n1 and n - n1."""

    n1: int
    sigma: float
    minimizing_partition: BlockPartition
    exact: bool

    @property
    def first_block(self) -> List[int]:
        return self.minimizing_partition.members(0).tolist()


def _cross_mass(S: np.ndarray, X: np.ndarray) -> np.ndarray:
    """e^T S12 e for each 0/1 row of X marking block one: x^T S (1 - x)."""
    row_sums = S.sum(axis=1)
    return X @ row_sums - np.einsum("bi,bi->b", X @ S, X)


def sigma_of(S: np.ndarray, members) -> float:
    """Uncoupling fraction 2 e^T S12 e / e^T S e for one fixed block-one index set."""
    x = np.zeros(S.shape[0])
    x[list(members)] = 1.0
    return float(2.0 * _cross_mass(S, x[None, :])[0] / S.sum())


def _partition_from(n: int, members) -> BlockPartition:
    labels = np.ones(n, dtype=int)
    labels[list(members)] = 0
    return BlockPartition(labels)


def _exact(S: np.ndarray, n1: int):
    n = S.shape[0]
    total = S.sum()
    best_value, best_subset = np.inf, None
    combos = itertools.combinations(range(n), n1)

    while True:
        chunk = list(itertools.islice(combos, BATCH))
        if not chunk:
            break
        X = np.zeros((len(chunk), n))
        rows = np.repeat(np.arange(len(chunk)), n1)
        X[rows, np.asarray(chunk).ravel()] = 1.0
        values = 2.0 * _cross_mass(S, X) / total
        # argmin keeps the first (lexicographically smallest) subset among equals
        i = int(values.argmin())
        if values[i] < best_value:
            best_value, best_subset = float(values[i]), chunk[i]

    return max(best_value, 0.0), best_subset


def _spectral_seed(S: np.ndarray, n1: int) -> np.ndarray:
    """n1 indices from either end of the second eigenvector of D^-1/2 S D^-1/2, whichever uncouples better."""
    scale = 1.0 / np.sqrt(S.sum(axis=1))
    spectrum = sym_eigen(scale[:, None] * S * scale[None, :])
    fiedler = spectrum.eigenvectors[:, 1]
    # the eigenvector sign is arbitrary
    top = np.argsort(-fiedler, kind="stable")[:n1]
    bottom = np.argsort(fiedler, kind="stable")[:n1]
    return min((top, bottom), key=lambda members: sigma_of(S, members))


def _swap_refine(S: np.ndarray, members: np.ndarray) -> np.ndarray:
    """Best-improvement single swaps until no swap lowers the cross mass."""
    n = S.shape[0]
    x = np.zeros(n, dtype=bool)
    x[members] = True
    diag = np.diag(S)

    while True:
        inside = np.flatnonzero(x)
        outside = np.flatnonzero(~x)
        to_in = S[:, x].sum(axis=1)
        to_out = S[:, ~x].sum(axis=1)
        # external minus internal mass per element, relative to its current block
        gain = np.where(x, to_out - (to_in - diag), to_in - (to_out - diag))
        swap = gain[inside][:, None] + gain[outside][None, :] - 2.0 * S[np.ix_(inside, outside)]
        a, b = np.unravel_index(int(swap.argmax()), swap.shape)
        if swap[a, b] <= 1e-12 * S.sum():
            return inside
        x[inside[a]] = False
        x[outside[b]] = True


def uncoupling_measure(S, n1: int, exact_limit: int = 1_000_000) -> UncouplingReport:
    """
    Minimum over symmetric permutations of 2 e^T S12 e / e^T S e, S11 being n1 x n1.

    Enumerates all C(n, n1) index subsets when that count is at most
    ``exact_limit``; otherwise seeds a split from the second eigenvector and
    refines it by single swaps, which yields an upper bound.

    Raises:
        DomainError: If n1 is outside 1..n-1 or S is not nonnegative
    """
    S = as_sym_matrix(S, name="similarity matrix")
    n = S.shape[0]
    if not 1 <= n1 < n:
        raise DomainError(f"Block size n1 must satisfy 1 <= n1 < n={n}, got {n1}")
    if np.any(S < 0) or S.sum() <= 0:
        raise DomainError("Uncoupling measure needs a nonnegative, nonzero matrix")

    if math.comb(n, n1) <= exact_limit:
        sigma, subset = _exact(S, n1)
        return UncouplingReport(n1=n1, sigma=sigma, minimizing_partition=_partition_from(n, subset), exact=True)

    logger.info(f"🔍 C({n},{n1}) exceeds {exact_limit}; using spectral seed with swap refinement")
    members = _swap_refine(S, _spectral_seed(S, n1))
    members = np.sort(members)
    return UncouplingReport(
        n1=n1, sigma=sigma_of(S, members), minimizing_partition=_partition_from(n, members), exact=False,
    )


def sigma_sweep(S, exact_limit: int = 1_000_000, n1_values: Optional[List[int]] = None) -> List[UncouplingReport]:
    """Uncoupling measure for every n1 in 1..floor(n/2) (or the given values)."""
    S = as_sym_matrix(S, name="similarity matrix")
    values = n1_values or list(range(1, S.shape[0] // 2 + 1))
    return [uncoupling_measure(S, n1, exact_limit) for n1 in values]
