"""halfline: spectral asymptotics for -u'' + (x^m + P(x))u = E u on the
half-line, with an independent complex-shooting eigenvalue solver and
inverse coefficient recovery."""

__version__ = "0.1.0"

from .asym import (
    AsymptoticModel,
    BoundaryCondition,
    En0,
    K_closed,
    K_mj,
    K_quad,
    L_quad,
    L_series,
    N_asym,
    build_e,
    build_model,
    counting_residual,
    d_j,
    depth,
    eval_asym_E,
)
from .combin import PotentialSpec, b_j, b_jk, multi_indices, nu
from .errors import (
    BranchCrossingError,
    ConvergenceError,
    CoverageWarning,
    HypothesisViolationError,
    IllConditionedError,
    IndexCollisionError,
    NumericsError,
    QuadratureError,
)
from .inverse import InverseProblem, fit_e, recover_a
from .shoot import (
    EigenvalueRecord,
    asymptotic_record,
    N_numeric,
    ShootingConfig,
    ShootingProblem,
    boundary_fn,
    integrate,
    newton_refine,
    q_eval,
    scan,
    select_R,
    titchmarsh_count,
    wkb_init,
)
from .specfun import beta, cpow, gen_binomial, lngamma

__all__ = [
    "AsymptoticModel",
    "BoundaryCondition",
    "BranchCrossingError",
    "ConvergenceError",
    "CoverageWarning",
    "EigenvalueRecord",
    "En0",
    "HypothesisViolationError",
    "IllConditionedError",
    "IndexCollisionError",
    "InverseProblem",
    "K_closed",
    "K_mj",
    "K_quad",
    "L_quad",
    "L_series",
    "N_asym",
    "N_numeric",
    "NumericsError",
    "PotentialSpec",
    "QuadratureError",
    "ShootingConfig",
    "ShootingProblem",
    "asymptotic_record",
    "b_j",
    "b_jk",
    "beta",
    "boundary_fn",
    "build_e",
    "build_model",
    "counting_residual",
    "cpow",
    "d_j",
    "depth",
    "eval_asym_E",
    "fit_e",
    "gen_binomial",
    "integrate",
    "lngamma",
    "multi_indices",
    "newton_refine",
    "nu",
    "q_eval",
    "recover_a",
    "scan",
    "select_R",
    "titchmarsh_count",
    "wkb_init",
]
