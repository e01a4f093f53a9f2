import numpy as np
import pytest

from balance import check_support, sinkhorn_knopp
from consensus import consensus_sum
from datasets import baseball
from utils.errors import ConvergenceError, DomainError, SupportError

from .helpers import block_stochastic, random_ensemble


def alternating_normalization(S: np.ndarray, tol: float = 1e-14, max_iter: int = 100_000) -> np.ndarray:
    """Classic row/column Sinkhorn iteration used as an independent oracle."""
    r = np.ones(S.shape[0])
    c = np.ones(S.shape[0])
    for _ in range(max_iter):
        r = 1.0 / (S @ c)
        c = 1.0 / (S.T @ r)
        P = r[:, None] * S * c[None, :]
        if np.abs(P.sum(axis=1) - 1).max() < tol:
            break
    return P


def random_positive_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    M = rng.uniform(0.01, 1.0, size=(n, n))
    return (M + M.T) / 2.0


def test_baseball_matches_printed_balance(baseball_balanced):
    P = baseball_balanced.P
    mask = baseball.P_PRINTED_MASK
    assert np.max(np.abs(P - baseball.P_PRINTED)[mask]) < 5e-4
    # the masked entry must agree with its printed mirror
    assert abs(P[4, 1] - baseball.P_PRINTED[1, 4]) < 5e-4
    assert np.abs(P.sum(axis=1) - 1).max() <= 1e-10
    assert np.abs(P.sum(axis=0) - 1).max() <= 1e-10


def test_property_suite_on_random_positive_matrices(rng):
    for _ in range(200):
        n = int(rng.integers(2, 51))
        S = random_positive_symmetric(rng, n)
        B = sinkhorn_knopp(S)
        assert np.abs(B.P.sum(axis=1) - 1).max() <= 1e-10
        assert np.abs(B.P.sum(axis=0) - 1).max() <= 1e-10
        assert np.array_equal(B.P, B.P.T)
        assert np.all(B.d > 0)
        for c in (0.1, 10.0):
            np.testing.assert_allclose(sinkhorn_knopp(c * S).P, B.P, atol=1e-9, rtol=0)


def test_agrees_with_alternating_normalization(rng):
    for _ in range(20):
        n = int(rng.integers(2, 11))
        S = random_positive_symmetric(rng, n)
        np.testing.assert_allclose(sinkhorn_knopp(S).P, alternating_normalization(S), atol=1e-8, rtol=0)


def test_zero_pattern_is_preserved():
    n = 10
    S = 2.0 * np.eye(n) + np.eye(n, k=1) + np.eye(n, k=-1)
    B = sinkhorn_knopp(S)
    np.testing.assert_array_equal(B.P > 0, S > 0)
    assert B.residual <= 1e-10
    assert B.residual_history[-1] == B.residual


def test_scaling_bounded_by_ensemble_size(rng):
    for _ in range(30):
        members = random_ensemble(rng, int(rng.integers(4, 15)), int(rng.integers(3, 20)))
        S = consensus_sum(members)
        B = sinkhorn_knopp(S)
        assert B.d.max() <= 1.0 / np.sqrt(S.r) + 1e-12


def test_support_diagnosis():
    diagnosis = check_support(block_stochastic([2, 3], eps=0.0))
    assert not diagnosis.irreducible
    assert not diagnosis.fully_indecomposable
    assert check_support(np.array([[0.0, 1.0], [1.0, 0.0]])).irreducible
    assert not check_support(np.array([[0.0, 1.0], [1.0, 0.0]])).positive_diagonal
    assert check_support(baseball.S).fully_indecomposable


def test_unbalanceable_inputs_raise_support_error():
    with pytest.raises(SupportError) as info:
        sinkhorn_knopp(block_stochastic([2, 3], eps=0.0))
    assert info.value.exit_code == 3
    assert not info.value.diagnosis.irreducible

    with pytest.raises(SupportError):
        sinkhorn_knopp(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_non_convergence_carries_history(rng):
    S = random_positive_symmetric(rng, 6)
    with pytest.raises(ConvergenceError) as info:
        sinkhorn_knopp(S, max_iter=1)
    assert len(info.value.residual_history) == 2
    assert info.value.exit_code == 4


def test_invalid_arguments(rng):
    S = random_positive_symmetric(rng, 4)
    with pytest.raises(DomainError):
        sinkhorn_knopp(S, tol=0)
    with pytest.raises(DomainError):
        sinkhorn_knopp(S, d0=np.array([1.0, -1.0, 1.0, 1.0]))
    with pytest.raises(DomainError):
        sinkhorn_knopp(-S)


def test_explicit_start_reaches_same_balance(rng):
    S = random_positive_symmetric(rng, 5)
    np.testing.assert_allclose(sinkhorn_knopp(S, d0=np.ones(5)).P, sinkhorn_knopp(S).P, atol=1e-9, rtol=0)
