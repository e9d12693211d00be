"""Independent small-instance maximum-likelihood reference solver.

Used only by tests and acceptance checks to cross-validate the scaling
solvers; it deliberately shares no iteration machinery with them.  The
fit works in the log of the multiplicative parameters.  Poisson
likelihoods are maximized by damped Newton steps.  Multinomial
likelihoods are maximized under the explicit normalization constraint by
augmented-Lagrangian continuation (Newton steps on the penalized
objective, multiplier updates between rounds) followed by a Newton
polish of the stationarity system.  Several random restarts must agree
before a result is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .divergence import ObservedTable
from .errors import NotConvergedError
from .model import ModelMatrix

MAX_CELLS = 16
MAX_SUBSETS = 8


@dataclass(frozen=True)
class OracleResult:
    delta_hat: np.ndarray
    loglik: float
    kkt_residual: float


def log_likelihood(observed: ObservedTable, delta) -> float:
    """Log-likelihood of the data at a positive cell vector
    (kernel terms only; constants in the data are dropped)."""
    d = np.asarray(delta, dtype=float)
    y = observed.counts
    if observed.scheme == "poisson":
        return float(np.sum(y * np.log(d)) - d.sum())
    return float(np.sum(y * np.log(d)))


def poisson_objective(model: ModelMatrix, y, eta) -> tuple[float, np.ndarray]:
    """Poisson log-likelihood and its gradient in log-parameter space."""
    a = model.entries.astype(float)
    y = np.asarray(y, dtype=float)
    lam = np.exp(a.T @ eta)
    value = float(np.sum(y * (a.T @ eta)) - lam.sum())
    grad = a @ (y - lam)
    return value, grad


def multinomial_objective(
    model: ModelMatrix, q, eta, mu: float = 0.0, rho: float = 0.0
) -> tuple[float, np.ndarray]:
    """Augmented multinomial log-likelihood and gradient.

    The normalization defect h = sum(p) - 1 enters through the
    multiplier term -mu * h and the quadratic penalty -rho/2 * h**2.
    """
    a = model.entries.astype(float)
    q = np.asarray(q, dtype=float)
    p = np.exp(a.T @ eta)
    h = p.sum() - 1.0
    value = float((a @ q) @ eta - mu * h - 0.5 * rho * h * h)
    grad = a @ q - (mu + rho * h) * (a @ p)
    return value, grad


def _newton_max(value_grad_hess, eta, tol=1e-12, max_steps=200):
    """Damped Newton ascent; falls back to the gradient direction when
    the Hessian solve fails or produces a descent direction."""
    v, g, h = value_grad_hess(eta)
    for _ in range(max_steps):
        if np.abs(g).max() < tol:
            break
        try:
            step = np.linalg.solve(-h, g)
            if g @ step <= 0:
                step = g
        except np.linalg.LinAlgError:
            step = g
        t = 1.0
        for _ in range(60):
            cand = eta + t * step
            v_new, g_new, h_new = value_grad_hess(cand)
            if np.isfinite(v_new) and v_new > v:
                eta, v, g, h = cand, v_new, g_new, h_new
                break
            t *= 0.5
        else:
            break
    return eta, v, g


def _fit_poisson(model, y, eta0, tol):
    a = model.entries.astype(float)
    y = np.asarray(y, dtype=float)

    def vgh(eta):
        with np.errstate(over="ignore", invalid="ignore"):
            lam = np.exp(a.T @ eta)
            v = float(np.sum(y * (a.T @ eta)) - lam.sum())
            g = a @ (y - lam)
            h = -(a * lam) @ a.T
        return v, g, h

    eta, _, g = _newton_max(vgh, eta0, tol=min(tol, 1e-12))
    lam = np.exp(a.T @ eta)
    residual = float(np.abs(a @ y - a @ lam).max())
    if residual > tol:
        raise NotConvergedError(f"stationarity residual {residual:.3e} above {tol:.1e}")
    return lam, residual


def _fit_multinomial(model, q, eta0, tol):
    a = model.entries.astype(float)
    q = np.asarray(q, dtype=float)
    aq = a @ q
    eta = eta0.copy()
    mu, rho = 1.0, 10.0

    def vgh(eta_, mu_, rho_):
        with np.errstate(over="ignore", invalid="ignore"):
            p = np.exp(a.T @ eta_)
            h = p.sum() - 1.0
            v = float(aq @ eta_ - mu_ * h - 0.5 * rho_ * h * h)
            g = aq - (mu_ + rho_ * h) * (a @ p)
            ap = a @ p
            hess = -(mu_ + rho_ * h) * ((a * p) @ a.T) - rho_ * np.outer(ap, ap)
        return v, g, hess

    prev_h = np.inf
    for _ in range(60):
        eta, _, _ = _newton_max(lambda e: vgh(e, mu, rho), eta, tol=1e-12)
        p = np.exp(a.T @ eta)
        h = p.sum() - 1.0
        mu = mu + rho * h
        if abs(h) < 1e-12 and np.abs(aq - mu * (a @ p)).max() < 1e-12:
            break
        if abs(h) > 0.25 * abs(prev_h):
            rho *= 5.0
        prev_h = h

    # Newton polish of the stationarity system in (eta, mu)
    for _ in range(50):
        p = np.exp(a.T @ eta)
        resid = np.concatenate([aq - mu * (a @ p), [p.sum() - 1.0]])
        if np.abs(resid).max() < 1e-13:
            break
        ap = a @ p
        jac = np.zeros((len(eta) + 1, len(eta) + 1))
        jac[: len(eta), : len(eta)] = -mu * ((a * p) @ a.T)
        jac[: len(eta), len(eta)] = -ap
        jac[len(eta), : len(eta)] = ap
        try:
            step = np.linalg.solve(jac, -resid)
        except np.linalg.LinAlgError:
            break
        eta = eta + step[: len(eta)]
        mu = mu + step[len(eta)]

    p = np.exp(a.T @ eta)
    residual = float(
        max(np.abs(aq - mu * (a @ p)).max(), abs(p.sum() - 1.0))
    )
    if residual > tol:
        raise NotConvergedError(f"KKT residual {residual:.3e} above {tol:.1e}")
    return p, residual


def oracle_mle(
    model: ModelMatrix,
    observed: ObservedTable,
    tol: float = 1e-10,
    restarts: int = 5,
    seed: int = 0,
) -> OracleResult:
    """Reference maximum-likelihood fit for small models.

    Runs from a zero start plus random restarts; all converged runs must
    agree to 1e-7 per cell, and the one with the best likelihood is
    returned.
    """
    if model.n_cells > MAX_CELLS or model.n_subsets > MAX_SUBSETS:
        raise ValueError(
            f"oracle is limited to {MAX_CELLS} cells and {MAX_SUBSETS} subsets"
        )
    rng = np.random.default_rng(seed)
    starts = [np.zeros(model.n_subsets)]
    starts += [rng.uniform(-1.0, 1.0, model.n_subsets) for _ in range(restarts - 1)]

    solutions = []
    failures = []
    for eta0 in starts:
        try:
            if observed.scheme == "poisson":
                delta, residual = _fit_poisson(model, observed.q, eta0, tol)
            else:
                delta, residual = _fit_multinomial(model, observed.q, eta0, tol)
            solutions.append((delta, residual))
        except NotConvergedError as exc:
            failures.append(exc)
    if not solutions:
        raise NotConvergedError(f"all {len(starts)} starts failed: {failures[0]}")
    reference = solutions[0][0]
    for delta, _ in solutions[1:]:
        if np.abs(delta - reference).max() > 1e-7:
            raise NotConvergedError("restarts disagree beyond 1e-7 per cell")
    best = max(solutions, key=lambda s: log_likelihood(observed, s[0]))
    return OracleResult(
        delta_hat=best[0],
        loglik=log_likelihood(observed, best[0]),
        kkt_residual=best[1],
    )
