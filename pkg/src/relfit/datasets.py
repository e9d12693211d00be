"""Shipped example models and data used in tests and the documentation."""

from __future__ import annotations

import numpy as np

from .divergence import ObservedTable
from .model import ModelMatrix


def three_feature_independence() -> ModelMatrix:
    """Independence of three features with no unaffected cases.

    Seven cells (each nonempty feature combination), three generating
    subsets (one per feature).  The all-ones vector is not in the row
    space: the probability version is a curved family.
    """
    return ModelMatrix(
        np.array(
            [
                [1, 0, 0, 1, 1, 0, 1],
                [0, 1, 0, 1, 0, 1, 1],
                [0, 0, 1, 0, 1, 1, 1],
            ]
        ),
        cell_labels=("A", "B", "C", "AB", "AC", "BC", "ABC"),
        subset_labels=("S1", "S2", "S3"),
    )


def three_feature_q() -> np.ndarray:
    """Observed distribution for the three-feature example."""
    return np.array([0.04, 0.04, 0.04, 0.04, 0.04, 0.24, 0.56])


def three_feature_table() -> ObservedTable:
    return ObservedTable(three_feature_q(), "multinomial")


def independence_2x2() -> ModelMatrix:
    """Two-by-two-table independence, full-rank parameterization.

    Rows: overall effect, first-row indicator, first-column indicator.
    Cells ordered 11, 12, 21, 22.
    """
    return ModelMatrix(
        np.array(
            [
                [1, 1, 1, 1],
                [1, 1, 0, 0],
                [1, 0, 1, 0],
            ]
        ),
        cell_labels=("11", "12", "21", "22"),
        subset_labels=("overall", "row1", "col1"),
    )


def independence_2x2_features() -> np.ndarray:
    """Two-by-two independence as four indicator rows (both row and both
    column indicators).  Redundant as a parameterization (rank 3), but
    every cell has degree 2, which is the form generalized iterative
    scaling needs."""
    return np.array(
        [
            [1, 1, 0, 0],
            [0, 0, 1, 1],
            [1, 0, 1, 0],
            [0, 1, 0, 1],
        ]
    )
