import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rebalance.dataset import Dataset  # noqa: E402


def make_dataset(rows, labels):
    X = np.asarray(rows, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return Dataset(X, np.asarray(labels))


def random_dataset(rng, n_max=200, d_max=4, min_minority=2, integer=False):
    """Random two-class dataset; the larger class may be either label."""
    n = int(rng.integers(max(6, 2 * min_minority + 1), n_max + 1))
    d = int(rng.integers(1, d_max + 1))
    n_min = int(rng.integers(min_minority, n // 2 + 1))
    minority_label = int(rng.integers(0, 2))
    labels = np.full(n, 1 - minority_label)
    labels[rng.choice(n, n_min, replace=False)] = minority_label
    if integer:
        X = rng.integers(0, 6, size=(n, d)).astype(float)
    else:
        X = rng.normal(size=(n, d)) + labels[:, None] * rng.uniform(0, 3)
    return Dataset(X, labels)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
