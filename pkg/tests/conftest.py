import numpy as np
import pytest

from msdaudit import BinaryDataset


def random_dataset(rng: np.random.Generator, n_features: int, n_samples: int) -> BinaryDataset:
    """Two groups drawn from different random product-plus-noise distributions."""
    n_mu = int(rng.integers(1, n_samples))
    n_nu = n_samples - n_mu
    p_mu = rng.uniform(0.05, 0.95, n_features)
    p_nu = np.clip(p_mu + rng.normal(0, 0.25, n_features), 0.02, 0.98)
    mu = (rng.random((n_mu, n_features)) < p_mu).astype(np.uint8)
    nu = (rng.random((n_nu, n_features)) < p_nu).astype(np.uint8)
    # correlated block so conjunctions matter
    if n_features >= 2 and n_mu >= 4:
        k = n_mu // 4
        mu[:k, :2] = 1
    return BinaryDataset.from_groups(mu.reshape(n_mu, n_features), nu.reshape(n_nu, n_features))


@pytest.fixture
def toy():
    # mu: (1,1)x3, (0,0)x1; nu: (1,1)x1, (0,0)x3
    return BinaryDataset.from_groups([[1, 1]] * 3 + [[0, 0]], [[1, 1]] + [[0, 0]] * 3)


@pytest.fixture
def msdd_toy():
    return BinaryDataset.from_groups([[1, 0], [1, 1]], [[1, 0], [1, 0]])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
