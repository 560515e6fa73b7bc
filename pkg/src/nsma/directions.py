"""Steepest (partial) descent directions in the unit infinity-norm ball."""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .core import InvalidArgument, NumericFailure, ProblemSpec, as_subset
from .lp import DirectionResult, solve_minimax_box

# Absolute stationarity floor used whenever a caller asks for eps = 0.
EPS_MIN = 1e-10


def _gradients(problem: ProblemSpec, x: np.ndarray, subset: tuple[int, ...]) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        J = np.asarray(problem.jac(x), dtype=float).reshape(problem.m, problem.n)
    G = J[list(subset)]
    if not np.all(np.isfinite(G)):
        raise NumericFailure("non-finite gradient at x")
    return G


def steepest_descent(problem: ProblemSpec, x, subset: Iterable[int] | None = None) -> DirectionResult:
    """Unconstrained direction: minimize the max directional derivative over ``||d||_inf <= 1``."""
    x = np.asarray(x, dtype=float)
    I = as_subset(subset, problem.m)
    if problem.is_singular(x):
        return DirectionResult(0.0, np.zeros(problem.n))
    G = _gradients(problem, x, I)
    one = np.ones(problem.n)
    return solve_minimax_box(G, -one, one)


def projected_descent(problem: ProblemSpec, x, subset: Iterable[int] | None = None) -> DirectionResult:
    """Constrained direction: as :func:`steepest_descent` but keeping ``x + d`` in the box."""
    x = np.asarray(x, dtype=float)
    I = as_subset(subset, problem.m)
    if not problem.contains(x):
        raise InvalidArgument("x lies outside the feasible box")
    if problem.is_singular(x):
        return DirectionResult(0.0, np.zeros(problem.n))
    G = _gradients(problem, x, I)
    lo = np.maximum(problem.lower - x, -1.0)
    hi = np.minimum(problem.upper - x, 1.0)
    return solve_minimax_box(G, lo, hi)


def is_eps_pareto_stationary(problem: ProblemSpec, x, subset: Iterable[int] | None = None, eps: float = 0.0) -> bool:
    if eps < 0:
        raise InvalidArgument("eps must be nonnegative")
    return projected_descent(problem, x, subset).theta >= -max(eps, EPS_MIN)
