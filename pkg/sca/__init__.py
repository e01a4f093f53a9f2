"""Stochastic (SCA) and custom (CCA) clustering engines."""

from .config import SCAConfig
from .custom import CustomCluster, closest_entries, run_cca
from .engine import (
    EvolutionState,
    PartitionCount,
    RestartSummary,
    SCAResult,
    TraceEntry,
    detect_k,
    run_restarts,
    run_sca,
)
from .ipv import random_ipv
from .partition import gap_partition, kmeans_partition, split

__all__ = [
    "CustomCluster",
    "EvolutionState",
    "PartitionCount",
    "RestartSummary",
    "SCAConfig",
    "SCAResult",
    "TraceEntry",
    "closest_entries",
    "detect_k",
    "gap_partition",
    "kmeans_partition",
    "random_ipv",
    "run_cca",
    "run_restarts",
    "run_sca",
    "split",
]
