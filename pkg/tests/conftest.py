import numpy as np
import pytest

import consensuskit as ck
from helpers import DEMO5, DEMO7, random_proper_matrix


@pytest.fixture(scope="session")
def demo7_analysis() -> ck.ConsensusAnalysis:
    return ck.analyze(DEMO7)


@pytest.fixture(scope="session")
def demo5_analysis() -> ck.ConsensusAnalysis:
    return ck.analyze(DEMO5)


@pytest.fixture(scope="session")
def proper_batch() -> list[np.ndarray]:
    """Deterministic batch of random proper matrices, n in 2..8."""
    rng = np.random.default_rng(7001)
    return [random_proper_matrix(rng) for _ in range(40)]


@pytest.fixture(scope="session")
def proper_small_batch() -> list[np.ndarray]:
    """Deterministic batch with n <= 6 (small enough for forest enumeration)."""
    rng = np.random.default_rng(7002)
    return [random_proper_matrix(rng, n=int(rng.integers(2, 7))) for _ in range(25)]
