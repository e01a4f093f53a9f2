import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from core.matrix import evolve, normalize_probability, permute_sym
from datasets import baseball
from ensemble import ClusteringResult, same_partition
from sca import (
    SCAConfig,
    closest_entries,
    gap_partition,
    kmeans_partition,
    random_ipv,
    run_cca,
    run_restarts,
    run_sca,
)
from utils.errors import (
    DegeneratePartitionError,
    DomainError,
    ExhaustionError,
    PathologicalToleranceError,
)

from .helpers import block_stochastic


def hidden_blocks(rng, sizes, eps):
    """A permuted block matrix and the labels of its hidden blocks."""
    base = np.repeat(np.arange(1, len(sizes) + 1), sizes)
    perm = rng.permutation(base.size)
    P = permute_sym(block_stochastic(sizes, eps), perm)
    return P, ClusteringResult(labels=base[perm], k=len(sizes))


# gap splitting


def test_gap_partition_reproduces_sample_row():
    C = gap_partition(baseball.X_TRACE[6], 2)
    assert baseball.named_clusters(C) == baseball.TRACE_CLUSTERS[6]


def test_gap_partition_singletons_and_ties():
    np.testing.assert_array_equal(gap_partition([0.5, 0.1, 0.4], 2).labels, [1, 2, 1])
    # equal gaps: the cut goes next to the largest values
    np.testing.assert_array_equal(gap_partition([3.0, 2.0, 1.0], 2).labels, [1, 2, 2])
    np.testing.assert_array_equal(gap_partition([0.1, 0.9, 0.5], 3).labels, [3, 1, 2])


def test_gap_partition_matches_best_cut_enumeration(rng):
    for _ in range(50):
        n = int(rng.integers(3, 9))
        k = int(rng.integers(2, n + 1))
        x = rng.random(n)
        values = np.sort(x)[::-1]
        gaps = values[:-1] - values[1:]
        best = max(itertools.combinations(range(n - 1), k - 1), key=lambda cuts: gaps[list(cuts)].sum())
        threshold = [values[c + 1] for c in best]
        labels = 1 + np.array([sum(v <= t for t in threshold) for v in x])
        assert same_partition(gap_partition(x, k), ClusteringResult(labels=labels, k=k))


def test_gap_partition_is_affine_invariant(rng):
    x = rng.random(10)
    C = gap_partition(x, 3)
    np.testing.assert_array_equal(gap_partition(4.0 * x - 7.0, 3).labels, C.labels)


def test_gap_partition_degenerate_and_invalid():
    with pytest.raises(DegeneratePartitionError) as info:
        gap_partition([1.0, 1.0, 0.0], 3)
    assert info.value.value == 1.0
    assert info.value.exit_code == 3
    with pytest.raises(DegeneratePartitionError):
        gap_partition([0.5, 0.5, 0.5], 2)
    with pytest.raises(DomainError):
        gap_partition([0.5, 0.2], 1)
    with pytest.raises(DomainError):
        gap_partition([0.5, 0.2], 3)


def test_kmeans_partition_orders_by_centroid():
    C = kmeans_partition([0.1, 0.9, 0.1, 0.9, 0.5], 3, seed=1)
    np.testing.assert_array_equal(C.labels, [3, 1, 3, 1, 2])
    with pytest.raises(DegeneratePartitionError):
        kmeans_partition([0.2, 0.2, 0.2], 2)


# initial vectors and configuration


def test_random_ipv_is_seeded_probability_vector():
    x = random_ipv(6, seed=11, uniform_tol=1e-3)
    assert x.sum() == pytest.approx(1.0)
    assert np.all(x > 0)
    np.testing.assert_array_equal(x, random_ipv(6, seed=11, uniform_tol=1e-3))
    assert not np.array_equal(x, random_ipv(6, seed=12, uniform_tol=1e-3))
    np.testing.assert_array_equal(random_ipv(6, seed=11, uniform_tol=0.0), x)


def test_random_ipv_rejects_pathological_tolerance():
    with pytest.raises(PathologicalToleranceError) as info:
        random_ipv(4, seed=0, uniform_tol=10.0)
    assert info.value.exit_code == 5
    with pytest.raises(DomainError):
        random_ipv(1, seed=0, uniform_tol=0.0)


def test_sca_config_validation():
    assert SCAConfig().uniform_tol(100) == pytest.approx(1e-4)
    assert SCAConfig(ipv_uniform_tol=0.0).uniform_tol(100) == 0.0
    with pytest.raises(ValidationError):
        SCAConfig(max_iter=3, stability_count=6)
    with pytest.raises(ValidationError):
        SCAConfig(k_override=1)
    with pytest.raises(ValidationError):
        SCAConfig(splitter="median")


# stochastic clustering


def test_sample_trace_clusterings(baseball_balanced):
    result = run_sca(baseball_balanced, x0=baseball.X_TRACE[0])
    assert result.k_used == 2
    assert result.perron is not None and result.perron.k == 2
    assert [baseball.named_clusters(e.clustering) for e in result.trace] == baseball.TRACE_CLUSTERS
    assert result.stop_reason == "stabilized"
    assert result.iterations_run == 7
    assert [e.t for e in result.trace] == list(range(8))


def test_sample_trace_values(baseball_balanced):
    x = normalize_probability(baseball.X_TRACE[0])
    for expected in baseball.X_TRACE[1:]:
        x = evolve(x, baseball_balanced.P)
        assert np.max(np.abs(x - expected)) < 5e-4


def test_random_starts_settle_on_two_groups(baseball_balanced):
    final = {frozenset(group) for group in baseball.FINAL_CLUSTERS}
    hits = 0
    for seed in range(100):
        result = run_sca(baseball_balanced, SCAConfig(seed=seed))
        hits += {frozenset(group) for group in baseball.named_clusters(result.clusters)} == final
    assert hits >= 95


def test_sca_recovers_hidden_blocks(rng):
    for _ in range(10):
        P, truth = hidden_blocks(rng, [3, 4, 5], eps=0.01)
        result = run_sca(P, SCAConfig(seed=int(rng.integers(1000))))
        assert result.k_used == 3
        assert result.stop_reason == "stabilized"
        assert same_partition(result.clusters, truth)


def test_kmeans_splitter_recovers_hidden_blocks(rng):
    P, truth = hidden_blocks(rng, [3, 4, 5], eps=0.01)
    result = run_sca(P, SCAConfig(seed=4, splitter="kmeans"))
    assert same_partition(result.clusters, truth)


def test_uniform_start_cannot_be_split(baseball_balanced):
    with pytest.raises(DegeneratePartitionError):
        run_sca(baseball_balanced, x0=np.ones(6))


def test_k_override_matching_detection_changes_nothing(baseball_balanced):
    detected = run_sca(baseball_balanced, SCAConfig(seed=3))
    forced = run_sca(baseball_balanced, SCAConfig(seed=3, k_override=2))
    np.testing.assert_array_equal(detected.clusters.labels, forced.clusters.labels)
    assert forced.perron is None
    assert forced.iterations_run == detected.iterations_run


def test_max_iter_stop_reason(baseball_balanced):
    result = run_sca(baseball_balanced, SCAConfig(max_iter=6, stability_count=6), x0=baseball.X_TRACE[0])
    assert result.stop_reason == "max_iter"
    assert result.iterations_run == 6


def test_sca_rejects_non_stochastic_input():
    with pytest.raises(DomainError):
        run_sca(2.0 * block_stochastic([2, 2], eps=0.1))
    with pytest.raises(DomainError):
        run_sca(block_stochastic([2, 2], eps=0.1), SCAConfig(k_override=5))


def test_restart_histogram(baseball_balanced):
    summary = run_restarts(baseball_balanced, SCAConfig(seed=0), restarts=20)
    counts = [entry.count for entry in summary.histogram]
    assert sum(counts) == 20
    assert counts == sorted(counts, reverse=True)
    assert summary.distinct == len(summary.histogram)
    top = {frozenset(group) for group in baseball.named_clusters(summary.histogram[0].clustering)}
    assert top == {frozenset(group) for group in baseball.FINAL_CLUSTERS}
    assert [r.perron.k for r in summary.results] == [2] * 20

    threaded = run_restarts(baseball_balanced, SCAConfig(seed=0), restarts=20, workers=4)
    for a, b in zip(summary.results, threaded.results):
        np.testing.assert_array_equal(a.clusters.labels, b.clusters.labels)
    with pytest.raises(DomainError):
        run_restarts(baseball_balanced, restarts=0)


# custom clustering


def test_closest_entries_prefers_lower_index():
    assert closest_entries(np.array([0.5, 0.1, 0.45, 0.55]), 0, 2) == [2, 3]
    assert closest_entries(np.array([0.3, 0.3, 0.3]), 1, 2) == [0, 2]


def test_cca_finds_block_of_target():
    P = block_stochastic([3, 4, 5], eps=0.01)
    found = run_cca(P, target=4, min_size=4, max_size=4)
    assert found.cluster == [3, 4, 5, 6]
    assert found.members == found.cluster
    assert found.t == 1
    assert found.k_used == 2


def test_cca_closest_companions_of_ott(baseball_balanced):
    ott = baseball.PLAYERS.index("Ott")
    found = run_cca(baseball_balanced, target=ott, min_size=2, max_size=3, closest_m=2)
    assert found.t == 1
    assert [baseball.PLAYERS[i] for i in found.members] == ["Ruth", "Mays"]
    assert ott in found.cluster


def test_cca_exhaustion_and_validation():
    P = block_stochastic([2, 2], eps=0.1)
    with pytest.raises(ExhaustionError) as info:
        run_cca(P, target=0, min_size=3, max_size=3, max_iter=20)
    assert info.value.exit_code == 5
    with pytest.raises(DomainError):
        run_cca(P, target=4, min_size=1, max_size=2)
    with pytest.raises(DomainError):
        run_cca(P, target=0, min_size=3, max_size=2)
    with pytest.raises(DomainError):
        run_cca(P, target=0, min_size=1, max_size=2, closest_m=4)
