"""Flat-file formats for models, data vectors, and fit results.

Model file: optional ``#`` comments and blank lines, then a header line
``J I``, then J rows of space-separated 0/1 entries.  Optional trailing
sections: ``cells <label>...``, ``subsets <label>...``, and ``kernel``
followed by I-J integer rows (verified against the matrix on load).

Data file: whitespace-separated nonnegative numbers, ``#`` comments.

Fit results are stored as JSON with full-precision floats, so a
write/read round trip reproduces every field bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import FileFormatError
from .model import KernelBasis, ModelMatrix, validate
from .solvers import FitResult


@dataclass(frozen=True)
class ModelFile:
    model: ModelMatrix
    kernel: KernelBasis | None = None


def _content_lines(path):
    with open(path) as fh:
        raw = fh.readlines()
    out = []
    for lineno, line in enumerate(raw, start=1):
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            out.append((lineno, stripped))
    return out


def read_model(path) -> ModelFile:
    lines = _content_lines(path)
    if not lines:
        raise FileFormatError(path, None, "empty model file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise FileFormatError(path, lineno, "header must be two integers: J I")
    try:
        n_subsets, n_cells = int(parts[0]), int(parts[1])
    except ValueError:
        raise FileFormatError(path, lineno, "header must be two integers: J I")
    if n_subsets < 1 or n_cells < 1:
        raise FileFormatError(path, lineno, "J and I must be positive")
    if len(lines) < 1 + n_subsets:
        raise FileFormatError(path, lineno, f"expected {n_subsets} matrix rows")

    def parse_int_row(entry, expected, what):
        lineno, text = entry
        tokens = text.split()
        if len(tokens) != expected:
            raise FileFormatError(
                path, lineno, f"{what} has {len(tokens)} entries, expected {expected}"
            )
        try:
            return [int(t) for t in tokens]
        except ValueError as exc:
            raise FileFormatError(path, lineno, f"bad integer in {what}: {exc}")

    rows = [
        parse_int_row(lines[1 + j], n_cells, f"matrix row {j}")
        for j in range(n_subsets)
    ]

    cell_labels = None
    subset_labels = None
    kernel_rows = []
    rest = lines[1 + n_subsets:]
    k = 0
    while k < len(rest):
        lineno, text = rest[k]
        keyword = text.split()[0]
        if keyword == "cells":
            labels = text.split()[1:]
            if len(labels) != n_cells:
                raise FileFormatError(path, lineno, f"expected {n_cells} cell labels")
            cell_labels = tuple(labels)
            k += 1
        elif keyword == "subsets":
            labels = text.split()[1:]
            if len(labels) != n_subsets:
                raise FileFormatError(path, lineno, f"expected {n_subsets} subset labels")
            subset_labels = tuple(labels)
            k += 1
        elif keyword == "kernel":
            k += 1
            while k < len(rest):
                kernel_rows.append(
                    parse_int_row(rest[k], n_cells, f"kernel row {len(kernel_rows)}")
                )
                k += 1
        else:
            raise FileFormatError(path, lineno, f"unexpected line: {text!r}")

    matrix = ModelMatrix(
        np.array(rows), cell_labels=cell_labels, subset_labels=subset_labels
    )
    try:
        validate(matrix)
    except Exception as exc:
        raise FileFormatError(path, None, f"invalid model matrix: {exc}")

    kernel = None
    if kernel_rows:
        kernel = KernelBasis(np.array(kernel_rows))
        product = kernel.entries @ matrix.entries.T
        if np.any(product != 0):
            raise FileFormatError(
                path, None, "supplied kernel basis does not annihilate the matrix rows"
            )
    return ModelFile(model=matrix, kernel=kernel)


def read_data(path, n_cells: int | None = None) -> np.ndarray:
    values = []
    for lineno, text in _content_lines(path):
        for token in text.split():
            try:
                values.append(float(token))
            except ValueError:
                raise FileFormatError(path, lineno, f"bad number {token!r}")
    if n_cells is not None and len(values) != n_cells:
        raise FileFormatError(
            path, None, f"data file has {len(values)} values, expected {n_cells}"
        )
    if any(v < 0 for v in values):
        raise FileFormatError(path, None, "data values must be nonnegative")
    return np.array(values)


def fit_result_to_dict(fit: FitResult, **extras) -> dict:
    out = {
        "delta_hat": [float(x) for x in fit.delta_hat],
        "theta_hat": [float(x) for x in fit.theta_hat],
        "gamma_hat": float(fit.gamma_hat),
        "iterations": int(fit.iterations),
        "converged": bool(fit.converged),
        "max_subsetsum_residual": float(fit.max_subsetsum_residual),
        "total": float(fit.total),
    }
    out.update(extras)
    return out


def fit_result_from_dict(payload: dict) -> FitResult:
    return FitResult(
        delta_hat=np.array(payload["delta_hat"]),
        theta_hat=np.array(payload["theta_hat"]),
        gamma_hat=payload["gamma_hat"],
        iterations=payload["iterations"],
        converged=payload["converged"],
        max_subsetsum_residual=payload["max_subsetsum_residual"],
        total=payload["total"],
    )


def write_json(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError(path, exc.lineno, exc.msg)
