"""Consensus similarity matrices."""

from .builder import (
    ConsensusMatrix,
    adjacency,
    combine,
    consensus_sum,
    isolated_elements,
    load_consensus,
    save_consensus,
    upper_triangle_values,
)
from .knn import knn_consensus, nearest_neighbors, neighbor_sets

__all__ = [
    "ConsensusMatrix",
    "adjacency",
    "combine",
    "consensus_sum",
    "isolated_elements",
    "knn_consensus",
    "load_consensus",
    "nearest_neighbors",
    "neighbor_sets",
    "save_consensus",
    "upper_triangle_values",
]
