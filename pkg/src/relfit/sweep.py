"""Grid sweep of improved iterative scaling over the probability simplex.

Enumerates every strictly positive distribution whose coordinates are
multiples of the grid step, runs IIS on each, and histograms the totals
of the limit vectors.  On models without the overall effect the totals
scatter widely away from 1, which is the phenomenon this harness
documents.  Output is data only (bin edges and counts); plotting is left
to external tools.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np

from .baselines import iis_fit
from .errors import MaxIterationsError, RelfitError
from .model import ModelMatrix

log = logging.getLogger(__name__)

MAX_POINTS = 1_000_000
BIN_WIDTH = 0.05


class GridTooFineError(RelfitError):
    def __init__(self, count: int):
        self.count = count
        super().__init__(
            f"grid would contain {count} points (limit {MAX_POINTS}); "
            "choose a coarser step"
        )


def simplex_grid(n_cells: int, step: float) -> np.ndarray:
    """All strictly positive vectors with coordinates that are multiples
    of ``step`` and sum to 1, as rows of an array.

    ``1 / step`` must be an integer; the number of points is the number
    of compositions of that integer into ``n_cells`` positive parts.
    """
    n = round(1.0 / step)
    if abs(n * step - 1.0) > 1e-9:
        raise ValueError(f"1/step must be an integer, got step={step}")
    count = comb(n - 1, n_cells - 1) if n >= n_cells else 0
    if count > MAX_POINTS:
        raise GridTooFineError(count)
    if count == 0:
        return np.empty((0, n_cells))
    from itertools import combinations

    points = np.empty((count, n_cells))
    for row, cuts in enumerate(combinations(range(1, n), n_cells - 1)):
        bounds = (0,) + cuts + (n,)
        points[row] = [bounds[k + 1] - bounds[k] for k in range(n_cells)]
    return points * step


@dataclass(frozen=True)
class SweepReport:
    grid_step: float
    points_evaluated: int
    totals: np.ndarray
    bin_edges: np.ndarray
    bin_counts: np.ndarray
    n_unconverged: int

    def to_dict(self) -> dict:
        return {
            "grid_step": float(self.grid_step),
            "points_evaluated": int(self.points_evaluated),
            "totals": [float(t) for t in self.totals],
            "bin_edges": [float(e) for e in self.bin_edges],
            "bin_counts": [int(c) for c in self.bin_counts],
            "n_unconverged": int(self.n_unconverged),
        }


def run_sweep(
    model: ModelMatrix,
    step: float,
    eps: float = 1e-6,
    max_iter: int = 20_000,
    jobs: int = 1,
) -> SweepReport:
    """Run IIS on every grid point and histogram the limit totals.

    Points whose IIS run exhausts ``max_iter`` are still counted, using
    the final iterate's total, and reported in ``n_unconverged``.
    Worker threads process points independently; results are collected
    in grid order, so the report is deterministic.
    """
    grid = simplex_grid(model.n_cells, step)
    unconverged = 0

    def one(q):
        try:
            p, _ = iis_fit(model, q, eps=eps, max_iter=max_iter)
            return float(p.sum()), True
        except MaxIterationsError as exc:
            return float(exc.result[0].sum()) if exc.result else float("nan"), False

    if jobs > 1 and len(grid):
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, grid))
    else:
        results = [one(q) for q in grid]

    totals = np.array([t for t, _ in results])
    unconverged = sum(1 for _, ok in results if not ok)
    if len(totals):
        lo = np.floor(totals.min() / BIN_WIDTH) * BIN_WIDTH
        hi = np.ceil(totals.max() / BIN_WIDTH) * BIN_WIDTH
        if hi <= lo:
            hi = lo + BIN_WIDTH
        edges = np.arange(lo, hi + 0.5 * BIN_WIDTH, BIN_WIDTH)
        counts, edges = np.histogram(totals, bins=edges)
    else:
        edges = np.array([])
        counts = np.array([], dtype=int)
    log.info("sweep: %d points, %d unconverged", len(totals), unconverged)
    return SweepReport(
        grid_step=step,
        points_evaluated=len(totals),
        totals=totals,
        bin_edges=edges,
        bin_counts=counts,
        n_unconverged=unconverged,
    )
