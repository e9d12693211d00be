"""Classical iterative scaling baselines: GIS and IIS.

These are included so that their behavior on probability models without
the overall effect can be demonstrated: generalized iterative scaling
refuses to run (its constant column-degree requirement is equivalent to
the overall effect), and improved iterative scaling converges to a
vector whose total differs from 1 and therefore cannot be the MLE.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .errors import (
    MaxIterationsError,
    NoPositiveCoefficientError,
    RowSumNotConstantError,
    ZeroSubsetSumError,
)
from .model import ModelMatrix, constant_rowsum_equivalent

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-8
DEFAULT_MAX_ITER = 100_000


def _as_matrix(model) -> np.ndarray:
    if isinstance(model, ModelMatrix):
        return model.entries.astype(float)
    return np.asarray(model, dtype=float)


def _check_targets(a: np.ndarray, q: np.ndarray) -> np.ndarray:
    targets = a @ q
    for j in range(a.shape[0]):
        if targets[j] <= 0:
            raise ZeroSubsetSumError(j)
    return targets


def gis_fit(
    model,
    q,
    eps: float = DEFAULT_EPS,
    max_iter: int = DEFAULT_MAX_ITER,
    auto_transform: bool = False,
    slack_feature: bool = False,
) -> tuple[np.ndarray, int]:
    """Generalized iterative scaling; returns (limit, iterations).

    Requires every cell to have the same total degree (equivalently,
    constant row sums of the matrix).  ``auto_transform`` re-parameterizes
    the model to a constant-degree form first, which only exists when the
    overall effect is present.  ``slack_feature`` instead appends a
    balancing row; note this genuinely changes the model, so it is never
    applied silently.
    """
    a = _as_matrix(model)
    q = np.asarray(q, dtype=float)
    degrees = a.sum(axis=0)
    if not np.allclose(degrees, degrees[0]):
        if slack_feature:
            top = degrees.max()
            a = np.vstack([a, top - degrees])
            log.info("added slack row; every cell now has degree %g", top)
        elif auto_transform:
            if not isinstance(model, ModelMatrix):
                raise RowSumNotConstantError(
                    "auto_transform needs a ModelMatrix to re-parameterize"
                )
            a, _ = constant_rowsum_equivalent(model)
            a = a.astype(float)
        else:
            raise RowSumNotConstantError(
                "cell degrees are not constant; pass auto_transform=True "
                "(requires the overall effect) or add a slack feature explicitly"
            )
        degrees = a.sum(axis=0)
    c = float(degrees[0])
    targets = _check_targets(a, q)

    n_cells = a.shape[1]
    p = np.full(n_cells, 1.0 / n_cells)
    for n in range(max_iter):
        sums = a @ p
        worst = float(np.abs(targets - sums).max())
        if worst <= eps:
            return p, n
        # one cycle of multipliers, applied cell-wise with exponent a_ji / c
        p = p * np.exp((a.T / c) @ np.log(targets / sums))
        if (n + 1) % 50 == 0:
            log.debug("gis iter=%d residual=%.3e", n + 1, worst)
    raise MaxIterationsError(max_iter, worst, result=(p, max_iter))


def gis(model, q, eps=DEFAULT_EPS, max_iter=DEFAULT_MAX_ITER,
        auto_transform=False, slack_feature=False) -> np.ndarray:
    p, _ = gis_fit(model, q, eps, max_iter, auto_transform, slack_feature)
    return p


def iis_inner_solve(weights, degrees, target: float) -> float:
    """Positive root of sum_k w_k * z**d_k = target.

    All weights are positive and all degrees are at least 1, so the left
    side is strictly increasing in z and the root is unique.  Terms are
    grouped by degree and the root is found by a doubling bracket
    followed by Newton steps safeguarded by bisection, to a relative
    tolerance of 1e-12.
    """
    coeff: dict[int, float] = {}
    for w, deg in zip(weights, degrees):
        if w > 0:
            coeff[int(deg)] = coeff.get(int(deg), 0.0) + float(w)
    if not coeff:
        raise NoPositiveCoefficientError("every coefficient is zero")
    if target <= 0:
        raise ValueError("target must be positive")
    terms = sorted(coeff.items())

    def f_and_fp(z: float) -> tuple[float, float]:
        f = 0.0
        fp = 0.0
        for deg, w in terms:
            zp = z ** (deg - 1)
            f += w * zp * z
            fp += w * deg * zp
        return f, fp

    total_w = sum(coeff.values())
    mean_deg = sum(d * w for d, w in terms) / total_w
    z = (target / total_w) ** (1.0 / mean_deg)
    lo, hi = 0.0, max(1.0, z)
    while f_and_fp(hi)[0] < target:
        lo = hi
        hi *= 2.0
    for _ in range(200):
        f, fp = f_and_fp(z)
        if f > target:
            hi = z
        else:
            lo = z
        step = (f - target) / fp
        z_new = z - step
        if not (lo < z_new < hi):
            z_new = 0.5 * (lo + hi)
        if abs(z_new - z) <= 1e-12 * max(abs(z_new), 1e-300):
            return z_new
        z = z_new
    return z


def iis_fit(
    model,
    q,
    eps: float = DEFAULT_EPS,
    max_iter: int = DEFAULT_MAX_ITER,
    trace: bool = False,
):
    """Improved iterative scaling; returns (limit, iterations[, history]).

    Each round solves one scaling equation per subset from the current
    vector and then applies all multipliers at once.  The limit is
    returned exactly as produced, without normalization; for models
    without the overall effect its total generally differs from 1.
    """
    a = _as_matrix(model)
    q = np.asarray(q, dtype=float)
    targets = _check_targets(a, q)
    n_subsets, n_cells = a.shape
    cell_degrees = a.sum(axis=0)
    supports = [np.flatnonzero(a[j] > 0) for j in range(n_subsets)]

    p = np.ones(n_cells)
    history: list[np.ndarray] = []
    for n in range(max_iter):
        sums = a @ p
        worst = float(np.abs(targets - sums).max())
        if worst <= eps:
            out = (p, n, history) if trace else (p, n)
            return out
        log_zeta = np.empty(n_subsets)
        for j in range(n_subsets):
            s = supports[j]
            log_zeta[j] = math.log(
                iis_inner_solve(p[s], cell_degrees[s], float(targets[j]))
            )
        p = p * np.exp(a.T @ log_zeta)
        if trace:
            history.append(p.copy())
        if (n + 1) % 50 == 0:
            log.debug("iis iter=%d residual=%.3e", n + 1, worst)
    raise MaxIterationsError(max_iter, worst, result=(p, max_iter))


def iis(model, q, eps=DEFAULT_EPS, max_iter=DEFAULT_MAX_ITER) -> np.ndarray:
    p, _ = iis_fit(model, q, eps, max_iter)
    return p
