"""Proportional scaling solvers for relational models.

``ipf_gamma`` cycles Bregman-projection steps that rescale one subset at
a time until every subset sum matches gamma times its observed value.
``gipf`` wraps it: intensities are fitted directly at gamma 1, and for
probabilities without the overall effect the adjustment factor is found
by a bracketed search (bisection by default, a uniformly refined grid as
an alternative).  Multiplicative parameters are tracked alongside the
cell values and returned with every fit.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .divergence import ObservedTable
from .errors import (
    MaxIterationsError,
    MaxOuterExceededError,
    ZeroSubsetSumError,
)
from .model import ModelMatrix

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-8
DEFAULT_MAX_ITER = 1_000_000
DEFAULT_MAX_OUTER = 200


@dataclass(frozen=True)
class FitResult:
    """Outcome of a scaling fit."""

    delta_hat: np.ndarray
    theta_hat: np.ndarray
    gamma_hat: float
    iterations: int
    converged: bool
    max_subsetsum_residual: float
    total: float
    trajectory: list | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class GammaBracket:
    """Endpoints whose fitted totals straddle 1."""

    gamma_l: float
    gamma_r: float


def ipf_update(delta, theta, model: ModelMatrix, q, gamma: float, j: int):
    """One projection step for subset j.

    Cells in the subset are multiplied by gamma * A_j q / A_j delta and
    the j-th multiplicative parameter absorbs the same factor (read off
    at the lowest-index cell of the subset); everything else is left
    untouched.  Returns new arrays; the inputs are not modified.
    """
    a_j = model.row(j)
    delta = np.asarray(delta, dtype=float)
    theta = np.asarray(theta, dtype=float)
    target = gamma * float(a_j @ np.asarray(q, dtype=float))
    if target <= 0:
        raise ZeroSubsetSumError(j)
    current = float(a_j @ delta)
    m = target / current
    new_delta = delta * np.where(a_j > 0, m, 1.0)
    i_star = int(np.flatnonzero(a_j > 0)[0])
    new_theta = theta.copy()
    new_theta[j] *= new_delta[i_star] / delta[i_star]
    return new_delta, new_theta


def ipf_gamma(
    model: ModelMatrix,
    q,
    gamma: float = 1.0,
    eps: float = DEFAULT_EPS,
    max_iter: int = DEFAULT_MAX_ITER,
    relative: bool = False,
    trace: bool = False,
) -> FitResult:
    """Cyclic proportional fitting toward A delta = gamma * A q.

    Starts from the all-ones vector, visits subsets in row order, and
    stops when every subset-sum residual is at most ``eps`` (absolute by
    default, relative to the target when ``relative`` is set).  The
    multiplicative parameters are accumulated in log space.  With
    ``trace`` the per-step cell and parameter vectors are recorded on
    the result.
    """
    a = model.entries.astype(float)
    n_subsets, n_cells = a.shape
    q = np.asarray(q, dtype=float)
    observed = a @ q
    for j in range(n_subsets):
        if observed[j] <= 0:
            raise ZeroSubsetSumError(j)
    target = gamma * observed
    scale = np.abs(target) if relative else np.ones(n_subsets)

    delta = np.ones(n_cells)
    log_theta = np.zeros(n_subsets)
    supports = [np.flatnonzero(a[j] > 0) for j in range(n_subsets)]
    history: list[tuple[np.ndarray, np.ndarray]] = []

    d = 0
    converged = False
    while True:
        sums = a @ delta
        residuals = np.abs(target - sums) / scale
        worst = float(residuals.max())
        if worst <= eps:
            converged = True
            break
        if d >= max_iter:
            break
        j = d % n_subsets
        m = target[j] / sums[j]
        delta[supports[j]] *= m
        log_theta[j] += math.log(m)
        d += 1
        if trace:
            history.append((delta.copy(), np.exp(log_theta)))
        if d % (10 * n_subsets) == 0:
            log.debug("gamma=%g iter=%d residual=%.3e", gamma, d, worst)

    result = FitResult(
        delta_hat=delta,
        theta_hat=np.exp(log_theta),
        gamma_hat=gamma,
        iterations=d,
        converged=converged,
        max_subsetsum_residual=worst,
        total=float(delta.sum()),
        trajectory=history if trace else None,
    )
    if not converged:
        raise MaxIterationsError(d, worst, result)
    return result


def gamma_bracket(model: ModelMatrix, q) -> GammaBracket:
    """Adjustment-factor bracket [1 / sum(A q), 1 / max_j A_j q].

    For normalized q the fitted total is at most 1 at the left endpoint
    and at least 1 at the right endpoint.
    """
    sums = model.entries @ np.asarray(q, dtype=float)
    return GammaBracket(
        gamma_l=float(1.0 / sums.sum()),
        gamma_r=float(1.0 / sums.max()),
    )


def gipf(
    model: ModelMatrix,
    observed: ObservedTable,
    eps: float = DEFAULT_EPS,
    method: str = "bisection",
    max_outer: int = DEFAULT_MAX_OUTER,
    max_iter: int = DEFAULT_MAX_ITER,
    trace: bool = False,
) -> FitResult:
    """Maximum-likelihood fit for either sampling scheme.

    Poisson intensities are fitted at gamma 1 and returned directly.
    Probabilities are first fitted at gamma 1; when the total already
    comes out at 1 (the regular-family case) that fit is the answer.
    Otherwise the adjustment factor is searched inside the bracket until
    the fitted total is within ``eps`` of 1, either by bisection on the
    sign of total - 1 or by the uniformly refined grid (resolution T
    with inner tolerance eps / T).
    """
    if method not in ("bisection", "grid"):
        raise ValueError(f"unknown method {method!r}")
    q = observed.q
    if observed.scheme == "poisson":
        return ipf_gamma(model, q, 1.0, eps, max_iter, trace=trace)

    first = ipf_gamma(model, q, 1.0, eps, max_iter, trace=trace)
    if abs(first.total - 1.0) < eps:
        return first
    bracket = gamma_bracket(model, q)
    total_iters = first.iterations

    if method == "bisection":
        lo, hi = bracket.gamma_l, bracket.gamma_r
        for outer in range(max_outer):
            g = 0.5 * (lo + hi)
            fit = ipf_gamma(model, q, g, eps, max_iter, trace=trace)
            total_iters += fit.iterations
            log.info("bisection %d: gamma=%.12g total=%.12g", outer, g, fit.total)
            if abs(fit.total - 1.0) < eps:
                return replace(fit, iterations=total_iters)
            if fit.total < 1.0:
                lo = g
            else:
                hi = g
        raise MaxOuterExceededError(max_outer, "bisection")

    for t_res in range(1, max_outer + 1):
        for t in range(t_res + 1):
            g = bracket.gamma_l + (t / t_res) * (bracket.gamma_r - bracket.gamma_l)
            fit = ipf_gamma(model, q, g, eps / t_res, max_iter, trace=trace)
            total_iters += fit.iterations
            if abs(fit.total - 1.0) < eps:
                log.info("grid T=%d accepted gamma=%.12g", t_res, g)
                return replace(fit, iterations=total_iters)
        log.info("grid T=%d exhausted", t_res)
    raise MaxOuterExceededError(max_outer, "grid refinement")
