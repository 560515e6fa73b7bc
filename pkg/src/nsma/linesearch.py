"""Armijo-type backtracking rules: single point (ALS), front-relative (FALS),
and front-relative with a feasibility guard (B-FALS)."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import Individual, InvalidArgument, ProblemSpec, as_subset, objective_matrix


class LineSearchFailure(RuntimeError):
    """No acceptable step was found within the halving cap."""


@dataclass(frozen=True)
class LineSearchParams:
    alpha0: float = 1.0
    delta: float = 0.5
    beta: float = 1e-4
    max_halvings: int = 60

    def __post_init__(self):
        if not self.alpha0 > 0:
            raise InvalidArgument("alpha0 must be positive")
        if not 0 < self.delta < 1 or not 0 < self.beta < 1:
            raise InvalidArgument("delta and beta must lie in (0, 1)")
        if self.max_halvings < 1:
            raise InvalidArgument("max_halvings must be positive")

    def steps(self):
        for h in range(self.max_halvings + 1):
            yield h, self.alpha0 * self.delta**h


class LineSearchResult(NamedTuple):
    alpha: float
    point: Individual
    evals: int
    infeasible_shrinks: int = 0


def als(problem: ProblemSpec, x, d, params: LineSearchParams = LineSearchParams()) -> LineSearchResult:
    """Shrink until every objective satisfies the Armijo condition along ``d``."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    fx = np.asarray(problem.eval(x), dtype=float)
    slope = np.asarray(problem.jac(x), dtype=float) @ d
    evals = 1
    for _, alpha in params.steps():
        z = x + alpha * d
        if not _inside(problem, z):
            raise InvalidArgument("ALS trial point left the box")
        cand = Individual.evaluate(problem, np.clip(z, problem.lower, problem.upper))
        evals += 1
        if np.all(cand.fx <= fx + params.beta * alpha * slope):
            return LineSearchResult(alpha, cand, evals)
    raise LineSearchFailure(f"ALS did not terminate after {params.max_halvings} halvings")


def _front_guard(front_F: np.ndarray, fz: np.ndarray, shift: float) -> bool:
    """True when the trial point is rejected by the front.

    Rejects if some y has F_I(y) + shift < F_I(z) in every component. Exact
    dominance of z is also rejected so that round-off in ``F(y) + shift`` can
    never let a dominated point through.
    """
    if len(front_F) == 0:
        return False
    if np.any(np.all(front_F + shift < fz, axis=1)):
        return True
    return bool(np.any(np.all(front_F <= fz, axis=1) & np.any(front_F < fz, axis=1)))


def _front_search(problem, subset, front, xc, d, theta, params, bounded, front_F=None):
    I = list(as_subset(subset, problem.m))
    if not theta < 0:
        raise InvalidArgument("theta must be negative")
    x = np.asarray(xc.x, dtype=float)
    d = np.asarray(d, dtype=float)
    # A dominated y cannot trigger the guard unless its dominator does, so the
    # full set gives the same answer as its non-dominated part.
    if front_F is None:
        front_F = objective_matrix(list(front), I) if len(front) else np.zeros((0, len(I)))
    evals = 0
    shrinks = 0
    for _, alpha in params.steps():
        z = x + alpha * d
        if not _inside(problem, z):
            if not bounded:
                raise InvalidArgument("FALS trial point left the box; use bfals for bound constraints")
            shrinks += 1
            continue
        cand = Individual.evaluate(problem, np.clip(z, problem.lower, problem.upper))
        evals += 1
        if not _front_guard(front_F, cand.fx[I], params.beta * alpha * theta):
            return LineSearchResult(alpha, cand, evals, shrinks)
    name = "B-FALS" if bounded else "FALS"
    raise LineSearchFailure(f"{name} did not terminate after {params.max_halvings} halvings")


def _inside(problem: ProblemSpec, z: np.ndarray) -> bool:
    # Absorb the last-bit rounding of x + alpha*d when a bound is hit exactly.
    tol_lo = 1e-12 * (1.0 + np.abs(problem.lower))
    tol_hi = 1e-12 * (1.0 + np.abs(problem.upper))
    return bool(np.all(z >= problem.lower - tol_lo) and np.all(z <= problem.upper + tol_hi))


def fals(problem: ProblemSpec, subset: Iterable[int] | None, front: Sequence[Individual], xc: Individual,
         d, theta: float, params: LineSearchParams = LineSearchParams()) -> LineSearchResult:
    return _front_search(problem, subset, front, xc, d, theta, params, bounded=False)


def bfals(problem: ProblemSpec, subset: Iterable[int] | None, front: Sequence[Individual], xc: Individual,
          d, theta: float, params: LineSearchParams = LineSearchParams(), *,
          front_objectives: np.ndarray | None = None) -> LineSearchResult:
    """Front Armijo search that also rejects steps leaving the feasible box.

    The accepted point is never dominated (w.r.t. the objectives in
    ``subset``) by a member of ``front``. Callers that keep the objective
    matrix of ``front`` restricted to ``subset`` can pass it as
    ``front_objectives`` to skip rebuilding it.
    """
    return _front_search(problem, subset, front, xc, d, theta, params, bounded=True, front_F=front_objectives)
