"""Exact linear algebra over the rationals for small dense matrices.

Everything here works on lists of :class:`fractions.Fraction`, so ranks,
null spaces, and row-space comparisons are exact.  Floating point never
enters; the callers rely on that to turn rank statements into hard
boolean answers instead of tolerance checks.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Row = list[Fraction]


def to_fractions(matrix) -> list[Row]:
    """Copy an integer matrix (any nested iterable) into Fraction rows."""
    return [[Fraction(int(x)) for x in row] for row in matrix]


def rref(rows: list[Row]) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form.

    Returns the (possibly shorter) list of nonzero rows in reduced
    echelon form together with the pivot column of each row.
    """
    m = [row[:] for row in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m[:r], pivots


def rank(matrix) -> int:
    rows = to_fractions(matrix)
    if not rows:
        return 0
    return len(rref(rows)[0])


def nullspace(matrix) -> list[Row]:
    """Basis of {v : M v = 0}, one vector per free column of the RREF.

    Each basis vector has entry 1 in its free column and the negated
    RREF coefficients in the pivot columns.
    """
    rows = to_fractions(matrix)
    if not rows:
        return []
    n_cols = len(rows[0])
    reduced, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][f]
        basis.append(v)
    return basis


def solve_combination(matrix, target) -> list[Fraction] | None:
    """Coefficients c with sum_j c[j] * row_j = target, or None.

    Solves the transposed system M' c = target by elimination on the
    augmented matrix; free coefficients are set to zero.
    """
    rows = to_fractions(matrix)
    if not rows:
        return None
    n_rows = len(rows)
    n_cols = len(rows[0])
    t = [Fraction(int(x)) if not isinstance(x, Fraction) else x for x in target]
    if len(t) != n_cols:
        raise ValueError("target length does not match the number of columns")
    # augmented transpose: n_cols equations in n_rows unknowns
    aug = [[rows[j][i] for j in range(n_rows)] + [t[i]] for i in range(n_cols)]
    reduced, pivots = rref(aug)
    if n_rows in pivots:  # pivot in the augmented column: inconsistent
        return None
    coeffs = [Fraction(0)] * n_rows
    for r, c in enumerate(pivots):
        coeffs[c] = reduced[r][n_rows]
    return coeffs


def integerize(vec: list[Fraction]) -> list[int]:
    """Scale a rational vector to the smallest integer vector with the
    same direction (clear denominators, then divide by the gcd)."""
    denom = 1
    for x in vec:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return ints
