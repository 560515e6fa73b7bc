"""Gradient-based and memetic multi-objective optimization with a benchmark harness."""

from .core import (
    Individual,
    InvalidArgument,
    NumericFailure,
    ProblemSpec,
    Unsupported,
    dominates,
    nondominated_subset,
    strictly_dominates,
)
from .descent import DescentBudget, fmopg, fpga, mopg
from .directions import is_eps_pareto_stationary, projected_descent, steepest_descent
from .genetic import GeneticParams, RunBudget, make_rng, nsga2
from .linesearch import LineSearchFailure, LineSearchParams, als, bfals, fals
from .memetic import NsmaParams, nsma_run
from .problems import initial_points, make_problem

__all__ = [
    "DescentBudget", "GeneticParams", "Individual", "InvalidArgument", "LineSearchFailure",
    "LineSearchParams", "NsmaParams", "NumericFailure", "ProblemSpec", "RunBudget", "Unsupported",
    "als", "bfals", "dominates", "fals", "fmopg", "fpga", "initial_points", "is_eps_pareto_stationary",
    "make_problem", "make_rng", "mopg", "nondominated_subset", "nsga2", "nsma_run", "projected_descent",
    "steepest_descent", "strictly_dominates",
]
