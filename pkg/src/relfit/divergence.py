"""Bregman divergence, observed tables, and subset sums."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatchError, NonPositiveError
from .model import ModelMatrix

SCHEMES = ("poisson", "multinomial")


@dataclass(frozen=True)
class ObservedTable:
    """Nonnegative observed counts plus the sampling scheme.

    The derived vector ``q`` is the raw counts under Poisson sampling
    and the counts normalized to sum 1 under multinomial sampling.
    """

    counts: np.ndarray
    scheme: str

    def __post_init__(self):
        y = np.asarray(self.counts, dtype=float)
        if y.ndim != 1:
            raise ValueError("counts must be a one-dimensional vector")
        if np.any(y < 0):
            bad = int(np.flatnonzero(y < 0)[0])
            raise ValueError(f"count {bad} is negative")
        if y.sum() <= 0:
            raise ValueError("counts must not be all zero")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        y.setflags(write=False)
        object.__setattr__(self, "counts", y)

    @property
    def q(self) -> np.ndarray:
        if self.scheme == "poisson":
            return self.counts
        return self.counts / self.counts.sum()


def _check_positive(v: np.ndarray, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    bad = np.flatnonzero(v <= 0)
    if bad.size:
        raise NonPositiveError(int(bad[0]), v[bad[0]])
    return v


def bregman(t, u) -> float:
    """Bregman divergence sum t log(t/u) + (sum u - sum t).

    Generated by x log x; both arguments must be strictly positive.
    Coincides with the Kullback-Leibler divergence when both vectors
    sum to one.
    """
    t = _check_positive(t, "t")
    u = _check_positive(u, "u")
    if t.shape != u.shape:
        raise LengthMismatchError(t.shape[0], u.shape[0])
    return float(np.sum(t * np.log(t / u)) + (u.sum() - t.sum()))


def subset_sums(model, delta) -> np.ndarray:
    """The vector A @ delta of subset sums (the sufficient statistics)."""
    a = model.entries if isinstance(model, ModelMatrix) else np.asarray(model)
    d = np.asarray(delta, dtype=float)
    if d.shape[0] != a.shape[1]:
        raise LengthMismatchError(a.shape[1], d.shape[0])
    return a @ d
