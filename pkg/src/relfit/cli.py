"""Command-line interface: ``fit``, ``check``, ``compare``, ``sweep``.

Exit codes: 0 on success, 1 on input errors, 2 on non-convergence.
The ``RELFIT_LOG`` environment variable (off, info, trace) controls
iteration logging.  Numbers are printed with 10 significant digits.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import baselines, fileio, sweep as sweep_mod
from .divergence import ObservedTable, bregman
from .errors import (
    MaxIterationsError,
    MaxOuterExceededError,
    RelfitError,
    RowSumNotConstantError,
)
from .model import (
    classify_homogeneity,
    has_overall_effect,
    kernel_basis,
    odds_ratios,
)
from .solvers import gipf

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NO_CONVERGENCE = 2


def fmt(x: float) -> str:
    return f"{x:.10g}"


def fmt_vector(v) -> str:
    return " ".join(fmt(float(x)) for x in v)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _configure_logging():
    level = {"off": logging.WARNING, "info": logging.INFO, "trace": logging.DEBUG}.get(
        os.environ.get("RELFIT_LOG", "off"), logging.WARNING
    )
    logging.basicConfig(level=level, format="%(name)s %(levelname)s %(message)s")


def _load_inputs(args):
    mf = fileio.read_model(args.model)
    data = fileio.read_data(args.data, mf.model.n_cells)
    observed = ObservedTable(data, args.scheme)
    return mf.model, observed


def _odds_ratio_residual(model, delta) -> float:
    basis = kernel_basis(model)
    if basis.n_rows == 0:
        return 0.0
    return float(np.abs(basis.entries @ np.log(delta)).max())


def cmd_fit(args) -> int:
    model, observed = _load_inputs(args)
    try:
        fit = gipf(
            model,
            observed,
            eps=args.eps,
            method=args.gamma_method,
            max_iter=args.max_iter,
        )
    except (MaxIterationsError, MaxOuterExceededError) as exc:
        print(f"fit did not converge: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE

    payload = fileio.fit_result_to_dict(
        fit,
        scheme=observed.scheme,
        eps=args.eps,
        gamma_method=args.gamma_method,
        overall_effect=has_overall_effect(model),
        odds_ratio_residual=_odds_ratio_residual(model, fit.delta_hat),
    )
    print(f"delta_hat:  {fmt_vector(fit.delta_hat)}")
    print(f"theta_hat:  {fmt_vector(fit.theta_hat)}")
    print(f"gamma_hat:  {fmt(fit.gamma_hat)}")
    print(f"total:      {fmt(fit.total)}")
    print(f"iterations: {fit.iterations}")
    print(f"max subset-sum residual: {fmt(fit.max_subsetsum_residual)}")
    print(f"overall effect: {'present' if payload['overall_effect'] else 'absent'}")
    print(f"odds-ratio residual: {fmt(payload['odds_ratio_residual'])}")
    if args.out:
        fileio.write_json(args.out, payload)
    return EXIT_OK


def cmd_check(args) -> int:
    mf = fileio.read_model(args.model)
    model = mf.model
    basis = mf.kernel or kernel_basis(model)
    specs = classify_homogeneity(basis)
    n_nonhom = sum(1 for s in specs if not s.homogeneous)
    print(f"subsets (J): {model.n_subsets}")
    print(f"cells (|I|): {model.n_cells}")
    print(f"overall effect: {'present' if has_overall_effect(model) else 'absent'}")
    print(f"kernel basis ({basis.n_rows} x {basis.n_cells}):")
    for spec in specs:
        tag = "homogeneous" if spec.homogeneous else "non-homogeneous"
        print(f"  {' '.join(f'{x:3d}' for x in spec.row)}   {tag}")
    print(f"non-homogeneous rows: {n_nonhom}")
    return EXIT_OK


def cmd_compare(args) -> int:
    model, observed = _load_inputs(args)
    q = observed.q
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    known = {"gipf", "ipf1", "gis", "iis"}
    for name in algorithms:
        if name not in known:
            raise RelfitError(f"unknown algorithm {name!r}; choose from {sorted(known)}")

    reference = None
    try:
        reference = gipf(model, observed, eps=args.eps)
    except (MaxIterationsError, MaxOuterExceededError):
        pass

    rows = []
    any_failed = False
    for name in algorithms:
        try:
            if name == "gipf":
                if reference is None:
                    raise MaxOuterExceededError(0, "reference fit failed")
                limit, iters, gamma = reference.delta_hat, reference.iterations, reference.gamma_hat
            elif name == "ipf1":
                from .solvers import ipf_gamma

                fit = ipf_gamma(model, q, 1.0, eps=args.eps)
                limit, iters, gamma = fit.delta_hat, fit.iterations, 1.0
            elif name == "gis":
                limit, iters = baselines.gis_fit(model, q, eps=args.eps)
                gamma = 1.0
            else:
                limit, iters = baselines.iis_fit(model, q, eps=args.eps)
                gamma = 1.0
            resid = float(np.abs(model.entries @ limit - gamma * (model.entries @ q)).max())
            or_resid = _odds_ratio_residual(model, limit)
            dist = bregman(limit, reference.delta_hat) if reference is not None else float("nan")
            rows.append(
                (name, fmt(float(limit.sum())), fmt(resid), fmt(or_resid), fmt(dist), str(iters))
            )
        except (MaxIterationsError, RowSumNotConstantError, RelfitError) as exc:
            any_failed = True
            rows.append((name, "-", "-", "-", "-", f"error: {type(exc).__name__}"))

    header = ("algorithm", "total", "subsetsum_resid", "oddsratio_resid", "bregman_to_gipf", "iterations")
    widths = [max(len(header[k]), max((len(r[k]) for r in rows), default=0)) for k in range(6)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return EXIT_NO_CONVERGENCE if any_failed else EXIT_OK


def cmd_sweep(args) -> int:
    mf = fileio.read_model(args.model)
    try:
        report = sweep_mod.run_sweep(
            mf.model, args.grid_step, eps=args.eps, max_iter=args.max_iter, jobs=args.jobs
        )
    except sweep_mod.GridTooFineError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT_ERROR
    print(f"grid step: {fmt(report.grid_step)}")
    print(f"points evaluated: {report.points_evaluated}")
    print(f"unconverged: {report.n_unconverged}")
    if report.points_evaluated:
        print(f"total range: [{fmt(report.totals.min())}, {fmt(report.totals.max())}]")
        off = int(np.sum(np.abs(report.totals - 1.0) > 0.05))
        print(f"totals with |total - 1| > 0.05: {off}")
    if args.out:
        fileio.write_json(args.out, report.to_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relfit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_fit_args(p, scheme_choices=("poisson", "multinomial")):
        p.add_argument("--model", required=True)
        p.add_argument("--data", required=True)
        p.add_argument("--scheme", required=True, choices=scheme_choices)
        p.add_argument("--eps", type=float, default=1e-8)
        p.add_argument("--max-iter", type=int, default=1_000_000)

    p_fit = sub.add_parser("fit", help="maximum-likelihood fit via generalized proportional fitting")
    add_fit_args(p_fit)
    p_fit.add_argument("--gamma-method", choices=("grid", "bisection"), default="bisection")
    p_fit.add_argument("--out")
    p_fit.set_defaults(func=cmd_fit)

    p_check = sub.add_parser("check", help="validate a model and report its structure")
    p_check.add_argument("--model", required=True)
    p_check.set_defaults(func=cmd_check)

    p_cmp = sub.add_parser("compare", help="compare scaling algorithms on one data set")
    add_fit_args(p_cmp, scheme_choices=("multinomial",))
    p_cmp.add_argument("--algorithms", default="gipf,gis,iis,ipf1")
    p_cmp.set_defaults(func=cmd_compare)

    p_sweep = sub.add_parser("sweep", help="IIS limit-total sweep over a simplex grid")
    p_sweep.add_argument("--model", required=True)
    p_sweep.add_argument("--grid-step", type=float, required=True)
    p_sweep.add_argument("--eps", type=float, default=1e-6)
    p_sweep.add_argument("--max-iter", type=int, default=20_000)
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--out")
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (MaxIterationsError, MaxOuterExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (RelfitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
