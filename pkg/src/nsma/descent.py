"""Gradient-based solvers: single-point MOPG, front-aware FMOPG, and FPGA."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .core import (
    Individual,
    InvalidArgument,
    NumericFailure,
    ProblemSpec,
    as_subset,
    dominated_by_any,
    objective_matrix,
    objective_subsets,
)
from .directions import EPS_MIN, projected_descent
from .lp import DirectionResult
from .linesearch import LineSearchFailure, LineSearchParams, als, bfals

log = logging.getLogger(__name__)

TraceSink = Callable[[dict], None]


@dataclass(frozen=True)
class DescentBudget:
    max_iters: int
    eps: float = 0.0
    deadline: float | None = None  # time.monotonic() instant

    def __post_init__(self):
        if self.max_iters < 1:
            raise InvalidArgument("max_iters must be at least 1")
        if self.eps < 0:
            raise InvalidArgument("eps must be nonnegative")

    @property
    def tol(self) -> float:
        return max(self.eps, EPS_MIN)

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() >= self.deadline


class DescentFailure(LineSearchFailure):
    """Line search failed inside a solver; ``last`` carries the last iterate."""

    def __init__(self, message: str, last: Individual):
        super().__init__(message)
        self.last = last


def mopg(problem: ProblemSpec, x0: Individual, budget: DescentBudget,
         params: LineSearchParams = LineSearchParams(), trace: TraceSink | None = None) -> Individual:
    """Projected steepest descent on all objectives with an all-objective Armijo rule."""
    if not problem.contains(x0.x):
        raise InvalidArgument("x0 must be feasible")
    x = x0
    for k in range(budget.max_iters):
        if budget.expired():
            break
        dr = projected_descent(problem, x.x)
        if dr.theta >= -budget.tol:
            break
        try:
            ls = als(problem, x.x, dr.d, params)
        except LineSearchFailure as exc:
            raise DescentFailure(str(exc), x) from exc
        x = ls.point
        if trace:
            trace({"iter": k, "theta": dr.theta, "alpha": ls.alpha, "x": x.x.tolist()})
    return x


def fmopg(problem: ProblemSpec, subset: Iterable[int] | None, X0: Sequence[Individual], x0: Individual,
          budget: DescentBudget, params: LineSearchParams = LineSearchParams(),
          trace: TraceSink | None = None, first: DirectionResult | None = None) -> list[Individual]:
    """Descend from ``x0`` w.r.t. ``F_I`` while accepting steps relative to a growing set.

    Returns the produced points ``x_1, ..., x_K`` (``x0`` excluded). Each new
    point joins the reference set used by the next line search. ``first`` lets
    callers reuse a direction already computed at ``x0``.
    """
    I = as_subset(subset, problem.m)
    if not any(y is x0 or np.array_equal(y.x, x0.x) for y in X0):
        raise InvalidArgument("x0 must belong to X0")
    X = list(X0)
    cols = list(I)
    FI = objective_matrix(X, I)
    if dominated_by_any(x0.fx[cols], FI):
        raise InvalidArgument("x0 is dominated within X0 for the chosen objectives")
    buf = np.empty((max(16, 2 * len(FI)), len(cols)))
    buf[:len(FI)] = FI
    size = len(FI)

    produced: list[Individual] = []
    x = x0
    for k in range(budget.max_iters):
        if budget.expired():
            break
        dr = first if (k == 0 and first is not None) else projected_descent(problem, x.x, I)
        if dr.theta >= -budget.tol:
            break
        try:
            ls = bfals(problem, I, X, x, dr.d, dr.theta, params, front_objectives=buf[:size])
        except LineSearchFailure as exc:
            log.debug("FMOPG line search failed at iteration %d: %s", k, exc)
            break
        x = ls.point
        X.append(x)
        if size == len(buf):
            buf = np.vstack([buf, np.empty_like(buf)])
        buf[size] = x.fx[cols]
        size += 1
        produced.append(x)
        if trace:
            trace({"iter": k, "theta": dr.theta, "alpha": ls.alpha, "x": x.x.tolist()})
    return produced


def fpga(problem: ProblemSpec, X0: Sequence[Individual], budget: DescentBudget,
         params: LineSearchParams = LineSearchParams(), trace: TraceSink | None = None) -> list[Individual]:
    """Front projected gradient algorithm.

    Each sweep tries every point of the current front. The first objective
    subset (full set first) for which the point is non-dominated and not
    stationary provides a direction; the accepted point replaces everything
    it dominates. Stops on ``max_iters`` sweeps, the deadline, or a sweep
    without any accepted step.
    """
    for x in X0:
        if not problem.contains(x.x):
            raise InvalidArgument("X0 must be feasible")
    subsets = objective_subsets(problem.m)
    front = list(X0)
    for sweep in range(budget.max_iters):
        if budget.expired():
            break
        snapshot = list(front)
        alive = {id(p) for p in front}
        F = objective_matrix(front) if front else np.zeros((0, problem.m))
        accepted = 0
        for xc in snapshot:
            if budget.expired():
                break
            if id(xc) not in alive:
                continue
            found = None
            for I in subsets:
                cols = list(I)
                if dominated_by_any(xc.fx[cols], F[:, cols]):
                    continue
                try:
                    dr = projected_descent(problem, xc.x, I)
                except NumericFailure:
                    continue
                if dr.theta < -EPS_MIN:
                    found = (I, dr)
                    break
            if found is None:
                continue
            I, dr = found
            try:
                ls = bfals(problem, I, front, xc, dr.d, dr.theta, params)
            except LineSearchFailure:
                continue
            z = ls.point
            keep = ~(np.all(z.fx <= F, axis=1) & np.any(z.fx < F, axis=1))
            front = [p for p, k in zip(front, keep) if k] + [z]
            F = np.vstack([F[keep], z.fx])
            alive = {id(p) for p in front}
            accepted += 1
        if trace:
            trace({"iter": sweep, "front_size": len(front), "accepted": accepted})
        if accepted == 0:
            break
    return front
