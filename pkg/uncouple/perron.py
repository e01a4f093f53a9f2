"""Perron cluster detection from a descending spectrum."""

import logging
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from core.matrix import Spectrum
from utils.errors import DomainError

logger = logging.getLogger(__name__)

# relative slack under which two gaps count as tied
GAP_TIE_TOL = 1e-12


@dataclass(eq=False)
class PerronCluster:
    k: int
    gap: float
    eigenvalues: np.ndarray


def perron_cluster(spec: Union[Spectrum, Sequence[float]]) -> PerronCluster:
    """
    Size of the Perron cluster: the smallest k at which lambda_k - lambda_{k+1} is maximal.

    Raises:
        DomainError: If fewer than two eigenvalues are given or they are not sorted descending
    """
    values = np.asarray(spec.eigenvalues if isinstance(spec, Spectrum) else spec, dtype=float)
    if values.size < 2:
        raise DomainError("Perron cluster needs at least two eigenvalues")
    gaps = values[:-1] - values[1:]
    if np.any(gaps < -1e-12 * max(1.0, np.abs(values).max())):
        raise DomainError("Eigenvalues must be sorted descending")

    largest = gaps.max()
    k = int(np.flatnonzero(gaps >= largest - GAP_TIE_TOL * max(1.0, abs(largest)))[0]) + 1
    if k == values.size - 1:
        logger.warning(f"⚠️ Largest spectral gap sits at the last position; using k={k}")
    return PerronCluster(k=k, gap=float(gaps[k - 1]), eigenvalues=values[:k].copy())
