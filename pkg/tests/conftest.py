"""Shared fixtures: reference matrices, a seeded generator and a two-group dataset."""

import numpy as np
import pytest

from balance import sinkhorn_knopp
from datasets import baseball
from ensemble import ClusteringResult, DataMatrix


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def baseball_S() -> np.ndarray:
    return baseball.S.copy()


@pytest.fixture
def baseball_balanced():
    return sinkhorn_knopp(baseball.S)


@pytest.fixture
def line_data() -> DataMatrix:
    """Two groups of 20 points on a line: 0.00..0.19 and 10.00..10.19."""
    x = np.concatenate([np.arange(20) * 0.01, 10.0 + np.arange(20) * 0.01])
    return DataMatrix(values=x[None, :], attribute_names=["x"])


@pytest.fixture
def line_truth() -> ClusteringResult:
    return ClusteringResult(labels=np.repeat([1, 2], 20), k=2, method="truth")
