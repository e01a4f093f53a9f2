import numpy as np
import pytest

from core.matrix import (
    BlockPartition,
    evolve,
    inverse_permutation,
    is_irreducible,
    normalize_probability,
    permute_sym,
    sym_eigen,
)
from utils.errors import DataFormatError, DimensionError, DomainError, IterationLimitError
from utils.matrix_io import read_matrix, write_matrix

from .helpers import block_stochastic, random_doubly_stochastic


def cubic_eigenvalues(A: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues of a symmetric 3x3 matrix, descending."""
    p1 = A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2
    q = np.trace(A) / 3.0
    p2 = (A[0, 0] - q) ** 2 + (A[1, 1] - q) ** 2 + (A[2, 2] - q) ** 2 + 2.0 * p1
    p = np.sqrt(p2 / 6.0)
    B = (A - q * np.eye(3)) / p
    r = np.clip(np.linalg.det(B) / 2.0, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    first = q + 2.0 * p * np.cos(phi)
    third = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    return np.array([first, 3.0 * q - first - third, third])


def test_jacobi_matches_closed_form_on_3x3(rng):
    for _ in range(100):
        M = rng.normal(size=(3, 3))
        A = (M + M.T) / 2.0
        spectrum = sym_eigen(A)
        assert np.max(np.abs(spectrum.eigenvalues - cubic_eigenvalues(A))) < 1e-9
        V = spectrum.eigenvectors
        assert np.max(np.abs(V.T @ V - np.eye(3))) < 1e-10


def test_jacobi_reconstructs_larger_matrices(rng):
    M = rng.normal(size=(12, 12))
    A = M + M.T
    spectrum = sym_eigen(A)
    V, w = spectrum.eigenvectors, spectrum.eigenvalues
    assert np.all(np.diff(w) <= 0)
    np.testing.assert_allclose(w, np.sort(np.linalg.eigvalsh(A))[::-1], atol=1e-10)
    np.testing.assert_allclose(A @ V, V * w, atol=1e-9)


def test_jacobi_values_only_and_sweep_limit(rng):
    A = random_doubly_stochastic(rng, 8)
    assert sym_eigen(A, vectors=False).eigenvectors is None

    with pytest.raises(IterationLimitError) as info:
        sym_eigen(A, max_sweeps=0)
    assert info.value.best is not None
    assert info.value.exit_code == 4


def test_jacobi_rejects_bad_input():
    with pytest.raises(DomainError):
        sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(DimensionError):
        sym_eigen(np.ones((2, 3)))
    with pytest.raises(DomainError):
        sym_eigen(np.eye(2), tol=0)


def test_doubly_stochastic_spectrum_of_block_matrix():
    w = sym_eigen(block_stochastic([3, 4, 5], eps=0.01), vectors=False).eigenvalues
    np.testing.assert_allclose(w[:3], [1.0, 0.99, 0.99], atol=1e-10)
    np.testing.assert_allclose(w[3:], 0.0, atol=1e-10)


def test_evolve_keeps_probability_mass(rng):
    P = random_doubly_stochastic(rng, 10)
    x = normalize_probability(rng.random(10))
    uniform = np.full(10, 0.1)
    distance = np.linalg.norm(x - uniform)
    for _ in range(20):
        x = evolve(x, P)
        assert abs(x.sum() - 1.0) <= 1e-12
        assert np.all(x >= 0)
        new_distance = np.linalg.norm(x - uniform)
        assert new_distance <= distance + 1e-14
        distance = new_distance


def test_evolve_checks_shapes_and_stochasticity():
    P = block_stochastic([2, 2], eps=0.1)
    with pytest.raises(DimensionError):
        evolve(np.full(3, 1 / 3), P)
    with pytest.raises(DomainError):
        evolve(np.full(4, 0.25), P * 1.1)


def test_normalize_probability_rejects_negative_and_zero():
    with pytest.raises(DomainError):
        normalize_probability([0.5, -0.1])
    with pytest.raises(DomainError):
        normalize_probability([0.0, 0.0])


def test_irreducibility():
    assert is_irreducible(block_stochastic([2, 3], eps=1e-6))
    assert not is_irreducible(block_stochastic([2, 3], eps=0.0))
    with pytest.raises(DomainError):
        is_irreducible(np.array([[1.0, -1.0], [-1.0, 1.0]]))


def test_permutations(rng):
    M = random_doubly_stochastic(rng, 6)
    perm = rng.permutation(6)
    permuted = permute_sym(M, perm)
    assert permuted[0, 1] == M[perm[0], perm[1]]
    np.testing.assert_array_equal(permute_sym(permuted, inverse_permutation(perm)), M)
    with pytest.raises(DomainError):
        permute_sym(M, [0, 0, 1, 2, 3, 4])


def test_block_partition_helpers():
    part = BlockPartition.from_blocks([[0, 1], [2, 3, 4], [5]])
    assert part.k == 3
    assert part.sizes == [2, 3, 1]
    np.testing.assert_array_equal(part.members(1), [2, 3, 4])

    perm, swapped = part.interchange(2)
    np.testing.assert_array_equal(perm, [5, 2, 3, 4, 0, 1])
    assert swapped.sizes == [1, 3, 2]

    with pytest.raises(DomainError):
        BlockPartition.from_blocks([[0, 1], [1, 2]])
    with pytest.raises(DomainError):
        BlockPartition.from_blocks([[0], [2]], n=3)
    with pytest.raises(DomainError):
        BlockPartition(np.array([0, 2, 2]))


def test_block_partition_from_labels():
    part = BlockPartition.from_labels([7, 3, 7, 3])
    np.testing.assert_array_equal(part.labels, [1, 0, 1, 0])


def test_matrix_file_is_lossless(tmp_path, rng):
    M = rng.random((5, 5)) / 3.0
    M = M + M.T
    path = write_matrix(tmp_path / "m.txt", M, {"kind": "external", "r": 3})
    back, meta = read_matrix(path)
    np.testing.assert_array_equal(back, M)
    assert meta == {"kind": "external", "r": "3"}

    vector, _ = read_matrix(write_matrix(tmp_path / "v.txt", M[0]))
    assert vector.shape == (5,)
    np.testing.assert_array_equal(vector, M[0])


def test_matrix_file_reports_bad_rows(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2\n1 2\n3\n", encoding="utf-8")
    with pytest.raises(DataFormatError) as info:
        read_matrix(path)
    assert info.value.row == 3
