"""Maximum-likelihood estimation in relational log-linear models.

Provides the model-matrix machinery (kernel bases, overall-effect test,
generalized odds ratios), the generalized proportional fitting solver
built from Bregman-projection steps, the classical GIS/IIS baselines,
an independent reference solver for small instances, and flat-file and
command-line front ends.
"""

from .baselines import gis, iis, iis_inner_solve
from .divergence import ObservedTable, bregman, subset_sums
from .errors import RelfitError
from .model import (
    KernelBasis,
    ModelMatrix,
    OddsRatioSpec,
    classify_homogeneity,
    constant_rowsum_equivalent,
    has_overall_effect,
    kernel_basis,
    odds_ratios,
    validate,
)
from .oracle import OracleResult, log_likelihood, oracle_mle
from .solvers import (
    FitResult,
    GammaBracket,
    gamma_bracket,
    gipf,
    ipf_gamma,
    ipf_update,
)

__version__ = "0.1.0"

__all__ = [
    "FitResult",
    "GammaBracket",
    "KernelBasis",
    "ModelMatrix",
    "ObservedTable",
    "OddsRatioSpec",
    "OracleResult",
    "RelfitError",
    "bregman",
    "classify_homogeneity",
    "constant_rowsum_equivalent",
    "gamma_bracket",
    "gipf",
    "gis",
    "has_overall_effect",
    "iis",
    "iis_inner_solve",
    "ipf_gamma",
    "ipf_update",
    "kernel_basis",
    "log_likelihood",
    "odds_ratios",
    "oracle_mle",
    "subset_sums",
    "validate",
]
