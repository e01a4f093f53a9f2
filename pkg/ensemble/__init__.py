"""Ensemble generators and clustering scores."""

from .kmeans import kmeans
from .nmf import assign_from_nmf, nmf_cluster, nmf_mu
from .runner import EnsembleRunner, EnsembleSpec, MemberSpec, run_ensemble
from .scoring import clustering_errors, member_error_range
from .types import ClusteringResult, DataMatrix, NmfFactors, same_partition

__all__ = [
    "ClusteringResult",
    "DataMatrix",
    "EnsembleRunner",
    "EnsembleSpec",
    "MemberSpec",
    "NmfFactors",
    "assign_from_nmf",
    "clustering_errors",
    "kmeans",
    "member_error_range",
    "nmf_cluster",
    "nmf_mu",
    "run_ensemble",
    "same_partition",
]
