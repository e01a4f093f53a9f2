"""Error counts of a clustering against ground truth, under the best relabeling."""

from typing import Iterable, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from utils.errors import DimensionError

from .types import ClusteringResult


def contingency(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Square co-occurrence table of two label vectors, padded with empty ids."""
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    size = max(ia.max(), ib.max()) + 1
    table = np.zeros((size, size), dtype=int)
    np.add.at(table, (ia, ib), 1)
    return table


def clustering_errors(C: ClusteringResult, truth: ClusteringResult) -> int:
    """
    Minimum number of mislabeled elements over all bijective relabelings of C onto truth.

    The optimal bijection is found with the Hungarian method, which yields the
    same minimum as enumerating every relabeling.

    Raises:
        DimensionError: If the two results cover different numbers of elements
    """
    if C.n != truth.n:
        raise DimensionError(
            f"Cannot compare clusterings of {C.n} and {truth.n} elements", expected=truth.n, got=C.n
        )
    table = contingency(C.labels, truth.labels)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return int(C.n - table[rows, cols].sum())


def member_error_range(ensemble: Iterable[ClusteringResult], truth: ClusteringResult) -> Tuple[int, int]:
    """(min, max) error count across ensemble members."""
    errors = [clustering_errors(member, truth) for member in ensemble]
    if not errors:
        raise DimensionError("Empty ensemble has no error range")
    return min(errors), max(errors)
