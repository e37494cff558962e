"""FISTA-family proximal solvers, proximity operators and benchmark harness."""

from .errors import NumericalFailure
from .momentum import MomentumParams, MomentumState, check_key_inequality, check_little_o_inequalities, limit_inertia, step
from .problems import gen_linear_inverse, gen_pcp, grad_f, lipschitz_power_method, objective
from .prox import (
    GroupStructure,
    ProxOperator,
    moreau_env_l1,
    project_l1_ball,
    prox_group_l12,
    prox_l1,
    prox_linf,
    prox_nuclear,
)
from .solvers import (
    AdaConfig,
    SolverConfig,
    SolverResult,
    estimate_strong_convexity,
    f_of_alpha,
    optimal_inertia,
    solve_ada_fista,
    solve_fbs,
    solve_fista,
)
from .trace import Trace, TraceRecord

__version__ = "0.1.0"

__all__ = [
    "AdaConfig",
    "GroupStructure",
    "MomentumParams",
    "MomentumState",
    "NumericalFailure",
    "ProxOperator",
    "SolverConfig",
    "SolverResult",
    "Trace",
    "TraceRecord",
    "check_key_inequality",
    "check_little_o_inequalities",
    "estimate_strong_convexity",
    "f_of_alpha",
    "gen_linear_inverse",
    "gen_pcp",
    "grad_f",
    "limit_inertia",
    "lipschitz_power_method",
    "moreau_env_l1",
    "objective",
    "optimal_inertia",
    "project_l1_ball",
    "prox_group_l12",
    "prox_l1",
    "prox_linf",
    "prox_nuclear",
    "solve_ada_fista",
    "solve_fbs",
    "solve_fista",
    "step",
]
