"""Custom Clustering Algorithm: the cluster (or closest companions) of one target element."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from balance.sinkhorn import BalancedMatrix
from core.matrix import evolve
from utils.errors import DomainError, ExhaustionError

from .engine import TraceEntry, as_evolution_matrix, detect_k
from .partition import split

logger = logging.getLogger(__name__)


@dataclass
class CustomCluster:
    target: int
    members: List[int]
    cluster: List[int]
    t: int
    x: np.ndarray
    k_used: int
    closest: Optional[List[int]] = None
    trace: List[TraceEntry] = field(default_factory=list)


def closest_entries(x: np.ndarray, target: int, m: int) -> List[int]:
    """The m indices other than target whose entries are nearest x[target]; lowest index on ties."""
    distance = np.abs(x - x[target])
    distance[target] = np.inf
    return np.argsort(distance, kind="stable")[:m].tolist()


def run_cca(
    B: Union[BalancedMatrix, np.ndarray],
    target: int,
    min_size: int,
    max_size: int,
    max_iter: int = 1000,
    closest_m: Optional[int] = None,
    k: Optional[int] = None,
    splitter: str = "gap",
    eigen_tol: float = 1e-12,
) -> CustomCluster:
    """
    Evolve the indicator vector of ``target`` and return its cluster once the size fits.

    After every step x_t is split as in the SCA (k from the Perron cluster unless
    given). When x_t has fewer distinct values than k, the split uses as many
    clusters as there are distinct values. The first cluster containing
    ``target`` with size in [min_size, max_size] is returned; with ``closest_m``
    the result's ``members`` are instead the m elements whose entries are
    nearest the target's at that step.

    Raises:
        DomainError: If target or the size bounds are invalid
        ExhaustionError: If no qualifying cluster appears within max_iter steps
    """
    P = as_evolution_matrix(B)
    n = P.shape[0]
    if not 0 <= target < n:
        raise DomainError(f"Target {target} outside 0..{n - 1}")
    if not 1 <= min_size <= max_size:
        raise DomainError(f"Need 1 <= min_size <= max_size, got {min_size}, {max_size}")
    if closest_m is not None and not 1 <= closest_m < n:
        raise DomainError(f"closest_m must satisfy 1 <= m < n={n}, got {closest_m}")
    if k is None:
        k = max(detect_k(P, eigen_tol).k, 2)

    x = np.zeros(n)
    x[target] = 1.0
    trace: List[TraceEntry] = []

    for t in range(1, max_iter + 1):
        x = evolve(x, P, check=False)
        distinct = np.unique(x).size
        k_eff = min(k, distinct)
        if k_eff < 2:
            logger.debug(f"t={t}: iterate is constant, nothing to split")
            continue
        if k_eff < k:
            logger.debug(f"t={t}: only {distinct} distinct values, splitting into {k_eff}")

        clustering = split(x, k_eff, splitter)
        trace.append(TraceEntry(t=t, x=x.copy(), clustering=clustering))
        cluster = clustering.members(clustering.labels[target]).tolist()

        if min_size <= len(cluster) <= max_size:
            closest = closest_entries(x, target, closest_m) if closest_m else None
            logger.info(f"✅ Custom cluster of size {len(cluster)} for element {target} at t={t}")
            return CustomCluster(
                target=target, members=closest if closest is not None else cluster,
                cluster=cluster, t=t, x=x.copy(), k_used=k_eff, closest=closest, trace=trace,
            )

    raise ExhaustionError(
        f"No cluster of size {min_size}..{max_size} around element {target} within {max_iter} iterations",
        trace=trace,
    )
