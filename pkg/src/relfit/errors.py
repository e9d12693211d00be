"""Exception types shared across the package."""


class RelfitError(Exception):
    """Base class for every error raised by this package."""


class ModelMatrixError(RelfitError):
    """A model matrix violates one of its structural requirements."""


class ZeroRowError(ModelMatrixError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row} of the model matrix is all zeros")


class ZeroColumnError(ModelMatrixError):
    def __init__(self, column: int):
        self.column = column
        super().__init__(f"column {column} of the model matrix is all zeros")


class NonBinaryEntryError(ModelMatrixError):
    def __init__(self, row: int, column: int, value):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(
            f"entry ({row}, {column}) of the model matrix is {value!r}; only 0 and 1 are allowed"
        )


class RankDeficientError(ModelMatrixError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(
            f"row {row} of the model matrix is a rational combination of earlier rows"
        )


class NoOverallEffectError(RelfitError):
    """The all-ones vector is not in the row space, so the requested
    re-parameterization does not exist."""


class LengthMismatchError(RelfitError):
    def __init__(self, expected: int, got: int, what: str = "vector"):
        self.expected = expected
        self.got = got
        super().__init__(f"{what} has length {got}, expected {expected}")


class NonPositiveError(RelfitError):
    """A cell vector contains a zero or negative entry."""

    def __init__(self, index: int, value):
        self.index = index
        self.value = value
        super().__init__(f"cell {index} is {value!r}; strictly positive values required")


class ZeroSubsetSumError(RelfitError):
    def __init__(self, subset: int):
        self.subset = subset
        super().__init__(
            f"observed subset sum for subset {subset} is zero; the MLE cannot be fitted"
        )


class MaxIterationsError(RelfitError):
    """Iteration budget exhausted before the stopping rule was met.

    Carries whatever partial result was available for diagnostics.
    """

    def __init__(self, iterations: int, residual: float, result=None):
        self.iterations = iterations
        self.residual = residual
        self.result = result
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(max subset-sum residual {residual:.3e})"
        )


class MaxOuterExceededError(RelfitError):
    def __init__(self, outer: int, detail: str = ""):
        self.outer = outer
        msg = f"adjustment-factor search did not converge after {outer} outer rounds"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class RowSumNotConstantError(RelfitError):
    """The columns of the model matrix do not all have the same degree,
    which generalized iterative scaling requires."""


class NoPositiveCoefficientError(RelfitError):
    """An inner scaling equation has no positive coefficient, so it has
    no positive root."""


class NotConvergedError(RelfitError):
    """The reference maximum-likelihood solver failed to reach its own
    tolerance."""


class FileFormatError(RelfitError):
    """A model, data, or result file could not be parsed."""

    def __init__(self, path, line: int | None, message: str):
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
