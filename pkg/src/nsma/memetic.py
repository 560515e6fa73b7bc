"""Memetic driver: NSGA-II with surrogate bounds, a crowding-distance gate
and periodic front-aware gradient refinement of selected members."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Individual,
    InvalidArgument,
    NumericFailure,
    ProblemSpec,
    dominated_by_any,
    objective_matrix,
    objective_subsets,
)
from .descent import DescentBudget, fmopg
from .directions import EPS_MIN, projected_descent
from .genetic import GeneticParams, RankedPopulation, RunBudget, evolve, get_metrics, get_survivors
from .linesearch import LineSearchFailure, LineSearchParams

log = logging.getLogger(__name__)


def default_eps_schedule(t: int) -> float:
    """Halve the local tolerance after every refinement round, down to 1e-7."""
    return max(1e-7, 1e-2 * 0.5**t)


@dataclass(frozen=True)
class NsmaParams:
    genetic: GeneticParams = field(default_factory=GeneticParams)
    s_h: float = 10.0
    q: float = 0.9
    n_opt: int = 5
    eps_schedule: Callable[[int], float] = default_eps_schedule
    local_max_iters: int = 200
    line_search: LineSearchParams = field(default_factory=LineSearchParams)

    def __post_init__(self):
        if self.s_h < 0:
            raise InvalidArgument("s_h must be nonnegative")
        if not 0 <= self.q <= 1:
            raise InvalidArgument("q must lie in [0, 1]")
        if self.n_opt < 1:
            raise InvalidArgument("n_opt must be positive")
        if self.local_max_iters < 1:
            raise InvalidArgument("local_max_iters must be positive")


def get_surrogate_bounds(pop: Sequence[Individual], lo, hi, s_h: float) -> tuple[np.ndarray, np.ndarray]:
    """Population bounding box widened by ``s_h`` and clipped to ``[lo, hi]``."""
    if not pop:
        raise InvalidArgument("population must be nonempty")
    X = np.stack([p.x for p in pop])
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    return np.maximum(lo, X.min(axis=0) - s_h), np.minimum(hi, X.max(axis=0) + s_h)


def get_crowding_distance_threshold(rp: RankedPopulation, q: float) -> float:
    """Lower nearest-rank ``q``-quantile of the finite crowding values of rank-0 members."""
    c = rp.crowding[(rp.rank == 0) & np.isfinite(rp.crowding)]
    if c.size == 0:
        return math.inf
    c = np.sort(c)
    k = max(1, math.ceil(q * c.size))
    return float(c[k - 1])


def optimize_population(problem: ProblemSpec, rp: RankedPopulation, c_bar: float, eps_t: float, N: int,
                        max_iters: int = 200, deadline: float | None = None,
                        params: LineSearchParams = LineSearchParams()) -> tuple[RankedPopulation, int]:
    """Refine promising members with FMOPG; returns the new survivors and the number of searches run.

    Candidates are rank-0 members whose crowding reaches ``c_bar``. For every
    objective subset (full set first) a candidate that is still non-dominated
    in the accumulated set and not ``eps_t``-stationary starts a local search
    whose produced points join the accumulated set.
    """
    budget = DescentBudget(max_iters, eps_t, deadline)
    tol = max(eps_t, EPS_MIN)
    acc = list(rp.members)
    F = objective_matrix(acc)
    launched = 0
    subsets = objective_subsets(problem.m)
    for i, p in enumerate(rp.members):
        if rp.rank[i] != 0 or not rp.crowding[i] >= c_bar:
            continue
        for I in subsets:
            if budget.expired():
                break
            cols = list(I)
            if dominated_by_any(p.fx[cols], F[:, cols]):
                continue
            try:
                dr = projected_descent(problem, p.x, I)
            except NumericFailure:
                continue
            if dr.theta >= -tol:
                continue
            launched += 1
            try:
                new = fmopg(problem, I, acc, p, budget, params, first=dr)
            except (NumericFailure, LineSearchFailure, InvalidArgument) as exc:
                log.debug("local search skipped: %s", exc)
                continue
            if new:
                acc.extend(new)
                F = np.vstack([F, objective_matrix(new)])
    if len(acc) == len(rp.members):
        return get_survivors(rp, N), launched
    return get_survivors(get_metrics(acc), N), launched


def nsma_run(problem: ProblemSpec, X0: Sequence[Individual], params: NsmaParams, budget: RunBudget,
             rng: np.random.Generator, trace: Callable[[dict], None] | None = None) -> list[Individual]:
    for x in X0:
        if not problem.contains(x.x):
            raise InvalidArgument("X0 must be feasible")
    N = params.genetic.pop_size
    rp = get_survivors(get_metrics(list(X0)), N)
    k = 0
    t = 0
    while not budget.exhausted(k):
        lo_s, hi_s = get_surrogate_bounds(rp.members, problem.lower, problem.upper, params.s_h)
        merged = evolve(problem, rp, lo_s, hi_s, params.genetic, rng)
        c_bar = get_crowding_distance_threshold(merged, params.q)
        rp = get_survivors(merged, N)
        launched = 0
        eps_t = None
        if k % params.n_opt == 0:
            eps_t = params.eps_schedule(t)
            rp, launched = optimize_population(problem, rp, c_bar, eps_t, N, params.local_max_iters,
                                               budget.deadline, params.line_search)
            t += 1
        k += 1
        if trace:
            trace({"generation": k, "objectives": objective_matrix(rp.members).tolist(),
                   "c_bar": c_bar, "n_local": launched, "eps_t": eps_t})
    return rp.members


__all__ = [
    "NsmaParams",
    "default_eps_schedule",
    "get_crowding_distance_threshold",
    "get_surrogate_bounds",
    "nsma_run",
    "optimize_population",
]
