"""Stochastic Clustering Algorithm: track x_t = x_{t-1} P until the clustering settles."""

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Deque, List, Optional, Union

import numpy as np

from balance.sinkhorn import BalancedMatrix
from core.matrix import STOCHASTIC_TOL, evolve, normalize_probability, stochastic_residual, sym_eigen
from ensemble.types import ClusteringResult, same_partition
from uncouple.perron import PerronCluster, perron_cluster
from utils.errors import DomainError

from .config import SCAConfig
from .ipv import random_ipv
from .partition import split

logger = logging.getLogger(__name__)


@dataclass
class TraceEntry:
    t: int
    x: np.ndarray
    clustering: ClusteringResult


@dataclass
class EvolutionState:
    """Current iterate plus the last ``stability_count`` clusterings."""

    x: np.ndarray
    t: int
    history: Deque[ClusteringResult]

    def stable(self) -> bool:
        if len(self.history) < self.history.maxlen:
            return False
        last = self.history[-1]
        return all(same_partition(c, last) for c in self.history)


@dataclass
class SCAResult:
    clusters: ClusteringResult
    k_used: int
    iterations_run: int
    stop_reason: str
    trace: List[TraceEntry] = field(default_factory=list)
    perron: Optional[PerronCluster] = None

    @property
    def x_final(self) -> np.ndarray:
        return self.trace[-1].x


def as_evolution_matrix(B: Union[BalancedMatrix, np.ndarray]) -> np.ndarray:
    P = B.P if isinstance(B, BalancedMatrix) else np.asarray(B, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise DomainError(f"Evolution matrix must be square, got shape {P.shape}")
    if stochastic_residual(P) > STOCHASTIC_TOL:
        raise DomainError("Evolution matrix is not doubly stochastic")
    return P


def detect_k(P: np.ndarray, eigen_tol: float = 1e-12) -> PerronCluster:
    """Cluster count from the Perron cluster of P's spectrum."""
    cluster = perron_cluster(sym_eigen(P, tol=eigen_tol, vectors=False))
    logger.info(f"🔍 Perron cluster has {cluster.k} eigenvalue(s); gap {cluster.gap:.4f}")
    return cluster


def run_sca(
    B: Union[BalancedMatrix, np.ndarray],
    cfg: Optional[SCAConfig] = None,
    x0: Optional[np.ndarray] = None,
) -> SCAResult:
    """
    Run the Stochastic Clustering Algorithm.

    Args:
        B: Balanced (doubly stochastic symmetric) matrix
        cfg: Run configuration; k comes from ``k_override`` or the Perron cluster
        x0: Explicit initial vector, bypassing the random draw

    Returns:
        SCAResult whose stop_reason is "stabilized" or "max_iter"

    Raises:
        DegeneratePartitionError: If an iterate has fewer than k distinct values
    """
    cfg = cfg or SCAConfig()
    P = as_evolution_matrix(B)
    n = P.shape[0]

    perron = None
    if cfg.k_override is not None:
        k = cfg.k_override
    else:
        perron = detect_k(P, cfg.eigen_tol)
        k = perron.k
    if k > n:
        raise DomainError(f"Cannot form {k} clusters from {n} elements")

    x = normalize_probability(x0) if x0 is not None else random_ipv(n, cfg.seed, cfg.uniform_tol(n))
    if k == 1:
        logger.warning("⚠️ Perron cluster holds a single eigenvalue; every element forms one cluster")
        single = ClusteringResult(labels=np.ones(n, dtype=int), k=1, method="sca-gap")
        return SCAResult(
            clusters=single, k_used=1, iterations_run=0, stop_reason="stabilized",
            trace=[TraceEntry(t=0, x=x, clustering=single)], perron=perron,
        )

    state = EvolutionState(x=x, t=0, history=deque(maxlen=cfg.stability_count))
    trace: List[TraceEntry] = []
    stop_reason = "max_iter"

    while True:
        clustering = split(state.x, k, cfg.splitter, seed=cfg.seed)
        state.history.append(clustering)
        trace.append(TraceEntry(t=state.t, x=state.x.copy(), clustering=clustering))
        if state.stable():
            stop_reason = "stabilized"
            break
        if state.t >= cfg.max_iter:
            break
        state.x = evolve(state.x, P, check=False)
        state.t += 1

    if stop_reason == "stabilized":
        logger.info(f"✅ Clustering stable for {cfg.stability_count} iterations at t={state.t}")
    else:
        logger.warning(f"⚠️ Reached max_iter={cfg.max_iter} without {cfg.stability_count} stable iterations")

    return SCAResult(
        clusters=trace[-1].clustering, k_used=k, iterations_run=state.t,
        stop_reason=stop_reason, trace=trace, perron=perron,
    )


@dataclass
class PartitionCount:
    clustering: ClusteringResult
    count: int
    first_restart: int


@dataclass
class RestartSummary:
    results: List[SCAResult]
    histogram: List[PartitionCount]

    @property
    def distinct(self) -> int:
        return len(self.histogram)


def run_restarts(
    B: Union[BalancedMatrix, np.ndarray],
    cfg: Optional[SCAConfig] = None,
    restarts: int = 1,
    workers: int = 1,
) -> RestartSummary:
    """
    Independent runs with seeds cfg.seed + j, tallied by distinct final partition.

    The histogram is ordered by count (descending), then by first appearance.
    """
    cfg = cfg or SCAConfig()
    if restarts < 1:
        raise DomainError(f"restarts must be >= 1, got {restarts}")
    P = as_evolution_matrix(B)
    perron = None
    if cfg.k_override is None:
        perron = detect_k(P, cfg.eigen_tol)
    fixed_k = cfg.k_override or perron.k

    def one(j: int) -> SCAResult:
        run_cfg = cfg.model_copy(update={"seed": cfg.seed + j, "k_override": fixed_k})
        result = run_sca(P, run_cfg)
        result.perron = perron
        return result

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(restarts)))
    else:
        results = [one(j) for j in range(restarts)]

    histogram: List[PartitionCount] = []
    for j, result in enumerate(results):
        for entry in histogram:
            if same_partition(entry.clustering, result.clusters):
                entry.count += 1
                break
        else:
            histogram.append(PartitionCount(clustering=result.clusters, count=1, first_restart=j))
    histogram.sort(key=lambda entry: (-entry.count, entry.first_restart))

    logger.info(f"✅ {restarts} restart(s) produced {len(histogram)} distinct clustering(s)")
    return RestartSummary(results=results, histogram=histogram)
