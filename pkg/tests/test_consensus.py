import numpy as np
import pytest

from consensus import (
    ConsensusMatrix,
    adjacency,
    combine,
    consensus_sum,
    isolated_elements,
    knn_consensus,
    load_consensus,
    nearest_neighbors,
    neighbor_sets,
    save_consensus,
    upper_triangle_values,
)
from datasets import baseball
from ensemble import ClusteringResult, DataMatrix
from utils.errors import DimensionError, DomainError
from utils.matrix_io import write_matrix

from .helpers import random_ensemble


def test_adjacency_marks_shared_labels():
    C = ClusteringResult(labels=np.array([1, 2, 1]), k=2)
    np.testing.assert_array_equal(adjacency(C), [[1, 0, 1], [0, 1, 0], [1, 0, 1]])


def test_consensus_sum_counts_co_clusterings(rng):
    members = random_ensemble(rng, 9, 25)
    S = consensus_sum(members)
    assert S.r == 25 and S.kind == "ensemble-sum"
    np.testing.assert_array_equal(np.diag(S.S), 25)
    np.testing.assert_array_equal(S.S, S.S.T)
    assert S.S.max() <= 25
    assert S.S[0, 1] == sum(m.labels[0] == m.labels[1] for m in members)


def test_consensus_sum_errors():
    with pytest.raises(DomainError):
        consensus_sum([])
    with pytest.raises(DimensionError):
        consensus_sum([
            ClusteringResult(labels=np.array([1, 2]), k=2),
            ClusteringResult(labels=np.array([1, 2, 2]), k=2),
        ])


def test_consensus_matrix_rejects_invalid_values():
    with pytest.raises(DomainError):
        ConsensusMatrix(S=np.array([[1.0, -1.0], [-1.0, 1.0]]), r=1)
    with pytest.raises(DomainError):
        ConsensusMatrix(S=np.array([[1.0, 2.0], [0.0, 1.0]]), r=1)
    with pytest.raises(DomainError):
        ConsensusMatrix(S=np.eye(2), r=1, kind="mystery")


def test_combine_adds_ensemble_sizes(rng):
    a = consensus_sum(random_ensemble(rng, 6, 4))
    b = consensus_sum(random_ensemble(rng, 6, 3))
    both = combine(a, b)
    assert both.r == 7 and both.kind == "combined"
    np.testing.assert_array_equal(both.S, a.S + b.S)
    with pytest.raises(DimensionError):
        combine(a, consensus_sum(random_ensemble(rng, 5, 2)))


def test_upper_triangle_of_38_elements_has_703_values(rng):
    S = consensus_sum(random_ensemble(rng, 38, 5))
    values = upper_triangle_values(S)
    assert values.size == 703
    assert values.sum() == (S.total - np.trace(S.S)) / 2


def test_isolated_elements():
    S = np.array([[3, 0, 0], [0, 3, 2], [0, 2, 3]])
    assert isolated_elements(S) == [0]
    assert isolated_elements(baseball.S) == []


def test_save_and_load_keep_metadata(tmp_path, line_data):
    S = knn_consensus(line_data, 20)
    path = save_consensus(tmp_path / "S.txt", S)
    back = load_consensus(path)
    assert back.kind == "knn" and back.r == 20
    assert back.metadata["mode"] == "intersection"
    np.testing.assert_array_equal(back.S, S.S)


def test_load_without_header_uses_diagonal(tmp_path):
    path = write_matrix(tmp_path / "S.txt", baseball.S)
    S = load_consensus(path)
    assert S.kind == "external"
    assert S.r == 100
    assert load_consensus(path, r=50).r == 50


def test_neighbor_sets_exclude_self(line_data):
    N = neighbor_sets(line_data, 20)
    assert N.shape == (40, 40)
    assert np.all(np.diag(N) == 0)
    np.testing.assert_array_equal(N.sum(axis=1), 20)
    # every left point reaches the nearest right point, and vice versa
    assert np.all(N[:20, 20] == 1)
    assert np.all(N[20:, 19] == 1)
    with pytest.raises(DomainError):
        neighbor_sets(line_data, 40)


def test_knn_intersection_counts(line_data):
    S = knn_consensus(line_data, 20)
    assert S.kind == "knn" and S.r == 20
    np.testing.assert_array_equal(np.diag(S.S), 20)
    assert S.S[0, 1] == 19
    assert S.S[0, 21] == 2
    assert S.S[0, 20] == 1
    assert S.S[19, 20] == 0


def test_knn_union_counts(line_data):
    S = knn_consensus(line_data, 20, mode="union")
    np.testing.assert_array_equal(np.diag(S.S), 20)
    assert S.S[0, 1] == 21
    assert S.S[0, 21] == 38
    with pytest.raises(DomainError):
        knn_consensus(line_data, 20, mode="both")


def test_knn_union_and_intersection_sum_to_twice_kappa(rng):
    A = DataMatrix(values=rng.random((3, 25)))
    off_diagonal = ~np.eye(25, dtype=bool)
    for kappa in (1, 5, 12):
        shared = knn_consensus(A, kappa).S
        pooled = knn_consensus(A, kappa, mode="union").S
        np.testing.assert_array_equal((shared + pooled)[off_diagonal], 2 * kappa)


def test_nearest_neighbors(line_data):
    assert nearest_neighbors(line_data, 0, 3) == [1, 2, 3]
    assert nearest_neighbors(line_data, 20, 1) == [21]
    assert nearest_neighbors(line_data, 19, 20)[-1] == 20
    with pytest.raises(DomainError):
        nearest_neighbors(line_data, 0, 40)
    with pytest.raises(DomainError):
        nearest_neighbors(line_data, 40, 2)
