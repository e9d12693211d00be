"""Model matrices, kernel bases, and generalized odds ratios.

A relational model over a finite table is generated by a 0-1 matrix
whose rows indicate subsets of cells.  This module holds the matrix
types, structural validation, the overall-effect test, the constant
row-sum re-parameterization, and odds-ratio evaluation.  All rank and
span questions are answered in exact rational arithmetic (see
:mod:`relfit.rational`): whether a family is regular or curved is a
boolean branch and must not depend on floating-point tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from . import rational
from .errors import (
    NoOverallEffectError,
    NonBinaryEntryError,
    NonPositiveError,
    RankDeficientError,
    RelfitError,
    ZeroColumnError,
    ZeroRowError,
)


@dataclass(frozen=True)
class ModelMatrix:
    """0-1 indicator matrix of the generating subsets (J rows, |I| columns)."""

    entries: np.ndarray
    cell_labels: tuple[str, ...] | None = None
    subset_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=int)
        if a.ndim != 2:
            raise ValueError("model matrix must be two-dimensional")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n_subsets(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cells(self) -> int:
        return self.entries.shape[1]

    def row(self, j: int) -> np.ndarray:
        return self.entries[j]


@dataclass(frozen=True)
class KernelBasis:
    """Integer matrix whose rows are a basis of the null space of the
    model matrix; its rows define the generalized odds ratios."""

    entries: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.entries, dtype=int)
        if d.ndim != 2:
            raise ValueError("kernel basis must be two-dimensional")
        d.setflags(write=False)
        object.__setattr__(self, "entries", d)

    @property
    def n_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cells(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class OddsRatioSpec:
    """One kernel-basis row split into its positive and negative parts."""

    row: np.ndarray
    positive_part: np.ndarray = field(init=False)
    negative_part: np.ndarray = field(init=False)
    homogeneous: bool = field(init=False)

    def __post_init__(self):
        d = np.asarray(self.row, dtype=int)
        d.setflags(write=False)
        object.__setattr__(self, "row", d)
        pos = np.maximum(d, 0)
        neg = np.maximum(-d, 0)
        pos.setflags(write=False)
        neg.setflags(write=False)
        object.__setattr__(self, "positive_part", pos)
        object.__setattr__(self, "negative_part", neg)
        object.__setattr__(self, "homogeneous", int(pos.sum()) == int(neg.sum()))


def validate(model: ModelMatrix) -> None:
    """Check all structural requirements, raising a named error for the
    first violation found.

    The matrix must be 0-1, have no all-zero row or column, and have
    linearly independent rows over the rationals.
    """
    a = model.entries
    bad = np.argwhere((a != 0) & (a != 1))
    if bad.size:
        r, c = bad[0]
        raise NonBinaryEntryError(int(r), int(c), model.entries[r, c])
    for j in range(model.n_subsets):
        if not a[j].any():
            raise ZeroRowError(j)
    for i in range(model.n_cells):
        if not a[:, i].any():
            raise ZeroColumnError(i)
    # pinpoint the first row that drops into the span of earlier ones
    if rational.rank(a) < model.n_subsets:
        for j in range(1, model.n_subsets):
            if rational.rank(a[: j + 1]) == rational.rank(a[:j]):
                raise RankDeficientError(j)
        raise RankDeficientError(0)


def has_overall_effect(model: ModelMatrix) -> bool:
    """True iff the all-ones vector lies in the rational row space."""
    a = model.entries
    stacked = np.vstack([a, np.ones(model.n_cells, dtype=int)])
    return rational.rank(stacked) == rational.rank(a)


def kernel_basis(model: ModelMatrix) -> KernelBasis:
    """Integer basis of the null space of the model matrix.

    Computed by exact rational elimination; each basis vector is cleared
    to its smallest integer representative.  The basis is then reduced
    so that at most one row is non-homogeneous: the homogeneity defect
    of a row is its coordinate sum, a linear function, so all but one
    defect can be eliminated by integer row operations.  The
    non-homogeneous row, if any, is placed last.
    """
    null = rational.nullspace(model.entries)
    rows = [rational.integerize(v) for v in null]
    rows = _reduce_homogeneity(rows)
    rows = [_normalize_sign(r) for r in rows]
    n = model.n_cells
    d = np.array(rows, dtype=int).reshape(len(rows), n)
    return KernelBasis(d)


def _gcd_reduce(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = gcd(g, abs(x))
    return [x // g for x in row] if g > 1 else row


def _reduce_homogeneity(rows: list[list[int]]) -> list[list[int]]:
    sums = [sum(r) for r in rows]
    nonzero = [k for k, s in enumerate(sums) if s != 0]
    if not nonzero:
        return rows
    p = min(nonzero, key=lambda k: abs(sums[k]))
    sp = sums[p]
    out = [rows[k] for k in range(len(rows)) if sums[k] == 0 and k != p]
    for k, r in enumerate(rows):
        if k == p or sums[k] == 0:
            continue
        out.append(_gcd_reduce([sp * a - sums[k] * b for a, b in zip(r, rows[p])]))
    out.append(rows[p])
    return out


def _normalize_sign(row: list[int]) -> list[int]:
    for x in row:
        if x != 0:
            return row if x > 0 else [-v for v in row]
    return row


def constant_rowsum_equivalent(model: ModelMatrix) -> tuple[np.ndarray, int]:
    """Nonnegative integer matrix with the same row space whose rows add
    up to a constant vector.

    Requires the overall effect.  If no row of the matrix equals the
    all-ones vector, one is synthesized by replacing a row that carries
    a nonzero coefficient in the rational combination producing the
    all-ones vector.  A telescoping chain of row differences then makes
    the rows sum to the all-ones vector, and shifting each row by its
    minimum restores nonnegativity.  Rows that become constant in the
    chain are replaced by the all-ones row to keep the rank.
    """
    if not has_overall_effect(model):
        raise NoOverallEffectError(
            "the all-ones vector is not in the row space; "
            "no constant row-sum parameterization exists"
        )
    a = [list(map(int, row)) for row in model.entries]
    n = model.n_cells
    ones = [1] * n
    ones_at = next((j for j, row in enumerate(a) if row == ones), None)
    if ones_at is None:
        coeffs = rational.solve_combination(model.entries, ones)
        ones_at = next(j for j, c in enumerate(coeffs) if c != 0)
        a[ones_at] = ones
    a[0], a[ones_at] = a[ones_at], a[0]

    j_count = len(a)
    star = [
        [x - y for x, y in zip(a[j], a[j + 1])] for j in range(j_count - 1)
    ] + [a[j_count - 1]]

    tilde = []
    for row in star:
        if all(x == row[0] for x in row):  # constant row: a multiple of 1
            tilde.append(ones[:])
        else:
            m = min(row)
            tilde.append([x - m for x in row])

    col_sums = [sum(tilde[j][i] for j in range(j_count)) for i in range(n)]
    c = col_sums[0]
    if any(s != c for s in col_sums):
        raise RelfitError("internal error: constructed matrix has unequal column degrees")
    t = np.array(tilde, dtype=int)
    stacked = np.vstack([model.entries, t])
    if not (
        rational.rank(t)
        == rational.rank(model.entries)
        == rational.rank(stacked)
    ):
        raise RelfitError("internal error: constructed matrix changed the row space")
    return t, int(c)


def odds_ratios(basis: KernelBasis, delta: np.ndarray) -> np.ndarray:
    """Generalized odds ratios of a strictly positive cell vector, one
    per basis row, evaluated in log space."""
    d = np.asarray(delta, dtype=float)
    if d.shape != (basis.n_cells,):
        raise ValueError(
            f"cell vector has shape {d.shape}, expected ({basis.n_cells},)"
        )
    bad = np.flatnonzero(d <= 0)
    if bad.size:
        raise NonPositiveError(int(bad[0]), d[bad[0]])
    return np.exp(basis.entries @ np.log(d))


def classify_homogeneity(basis: KernelBasis) -> list[OddsRatioSpec]:
    """Split each basis row into positive/negative parts and label each
    resulting odds ratio as homogeneous or not."""
    return [OddsRatioSpec(row) for row in basis.entries]
