from pathlib import Path

import numpy as np
import pytest

from relfit.datasets import (
    independence_2x2,
    independence_2x2_features,
    three_feature_independence,
    three_feature_q,
    three_feature_table,
)
from relfit.model import ModelMatrix, has_overall_effect, validate

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def curved_model():
    return three_feature_independence()


@pytest.fixture(scope="session")
def curved_q():
    return three_feature_q()


@pytest.fixture(scope="session")
def curved_table():
    return three_feature_table()


@pytest.fixture(scope="session")
def ind_model():
    return independence_2x2()


@pytest.fixture(scope="session")
def ind_features():
    return independence_2x2_features()


@pytest.fixture(scope="session")
def ind_q():
    return np.array([0.4, 0.1, 0.2, 0.3])


# closed-form MLE of 2x2 independence: outer product of the marginals
@pytest.fixture(scope="session")
def ind_mle(ind_q):
    row = np.array([ind_q[0] + ind_q[1], ind_q[2] + ind_q[3]])
    col = np.array([ind_q[0] + ind_q[2], ind_q[1] + ind_q[3]])
    return np.outer(row, col).ravel()


def random_overall_effect_matrix(rng) -> ModelMatrix:
    """Random valid 0-1 matrix whose row space contains the all-ones
    vector; |I| <= 10, J <= 5."""
    while True:
        n_cells = int(rng.integers(2, 11))
        n_subsets = int(rng.integers(1, min(5, n_cells) + 1))
        rows = np.zeros((n_subsets, n_cells), dtype=int)
        if rng.integers(0, 2) == 0 or n_subsets == 1:
            rows[0] = 1
            start = 1
        else:
            split = int(rng.integers(1, n_cells))
            perm = rng.permutation(n_cells)
            rows[0, perm[:split]] = 1
            rows[1, perm[split:]] = 1
            start = 2
        for j in range(start, n_subsets):
            rows[j] = rng.integers(0, 2, n_cells)
        model = ModelMatrix(rows)
        try:
            validate(model)
        except Exception:
            continue
        if has_overall_effect(model):
            return model
