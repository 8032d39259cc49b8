"""Solvers for the symmetric nonlinear continuous knapsack with antisymmetric sigmoid objectives."""

from .enumeration import enumerate_partitions, grid_oracle
from .kspace import (
    KSolution,
    ProblemInstance,
    SolveReport,
    continuous_feasible_range,
    integer_feasible_range,
    kkt_candidates,
    partial_k0,
    partial_k1,
    solve_continuous,
    solve_integer,
    y_from_counts,
)
from .objective import ObjectiveSpec, eval_F, make_objective, validate_assumptions
from .solver import solve
from .tangency import TangencyData, compute_d_r, preprocess, tangency_g
from .transform import antisym_complement, expand, normalize

__version__ = "0.1.0"

__all__ = [
    "KSolution",
    "ObjectiveSpec",
    "ProblemInstance",
    "SolveReport",
    "TangencyData",
    "antisym_complement",
    "compute_d_r",
    "continuous_feasible_range",
    "enumerate_partitions",
    "eval_F",
    "expand",
    "grid_oracle",
    "integer_feasible_range",
    "kkt_candidates",
    "make_objective",
    "normalize",
    "partial_k0",
    "partial_k1",
    "preprocess",
    "solve",
    "solve_continuous",
    "solve_integer",
    "tangency_g",
    "validate_assumptions",
    "y_from_counts",
]
