"""Shared problem and point types plus Pareto-dominance primitives."""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np


class InvalidArgument(ValueError):
    """A caller passed arguments that violate an operation's preconditions."""


class NumericFailure(ArithmeticError):
    """A numerical routine could not produce a trustworthy result."""

    def __init__(self, message: str, incumbent=None):
        super().__init__(message)
        self.incumbent = incumbent


class Unsupported(InvalidArgument):
    """Requested problem/metric/solver combination is not available."""


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """A bound-constrained multi-objective problem with an analytic Jacobian.

    ``eval`` maps a length-``n`` vector to ``m`` objective values and ``jac``
    returns the ``m x n`` Jacobian. ``singular`` optionally flags points where
    the Jacobian is not defined; those points are treated as Pareto-stationary.
    """

    name: str
    n: int
    m: int
    lower: np.ndarray
    upper: np.ndarray
    eval: Callable[[np.ndarray], np.ndarray]
    jac: Callable[[np.ndarray], np.ndarray]
    singular: Callable[[np.ndarray], bool] | None = None

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float).reshape(-1)
        upper = np.array(self.upper, dtype=float).reshape(-1)
        if self.n < 1 or self.m < 1:
            raise InvalidArgument("n and m must be positive")
        if lower.shape != (self.n,) or upper.shape != (self.n,):
            raise InvalidArgument("bounds must have length n")
        if np.any(lower > upper):
            raise InvalidArgument("lower bound exceeds upper bound")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def is_singular(self, x: np.ndarray) -> bool:
        return self.singular is not None and bool(self.singular(x))


@dataclass(frozen=True, eq=False)
class Individual:
    """A feasible decision vector together with its cached objective vector."""

    x: np.ndarray
    fx: np.ndarray = field(repr=False)

    @classmethod
    def evaluate(cls, problem: ProblemSpec, x) -> Individual:
        x = np.array(x, dtype=float).reshape(-1)
        if x.shape != (problem.n,):
            raise InvalidArgument(f"expected a vector of length {problem.n}, got {x.shape}")
        if not problem.contains(x):
            raise InvalidArgument("decision vector lies outside the feasible box")
        with np.errstate(over="ignore"):
            fx = np.array(problem.eval(x), dtype=float).reshape(-1)
        if fx.shape != (problem.m,):
            raise InvalidArgument(f"objective returned shape {fx.shape}, expected ({problem.m},)")
        x.flags.writeable = False
        fx.flags.writeable = False
        return cls(x, fx)


def as_subset(indices: Iterable[int] | None, m: int) -> tuple[int, ...]:
    """Validate an objective subset (0-based indices); ``None`` means all objectives."""
    if indices is None:
        return tuple(range(m))
    subset = tuple(int(i) for i in indices)
    if not subset:
        raise InvalidArgument("objective subset must be nonempty")
    if any(b <= a for a, b in zip(subset, subset[1:])):
        raise InvalidArgument("objective subset must be strictly increasing")
    if subset[0] < 0 or subset[-1] >= m:
        raise InvalidArgument(f"objective index out of range for m={m}")
    return subset


def objective_subsets(m: int) -> list[tuple[int, ...]]:
    """All nonempty subsets: full set first, then by decreasing size, lexicographic."""
    out = []
    for size in range(m, 0, -1):
        out.extend(itertools.combinations(range(m), size))
    return out


def _check_pair(u, v) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise InvalidArgument(f"length mismatch: {u.shape} vs {v.shape}")
    return u, v


def dominates(u, v) -> bool:
    """True iff ``u <= v`` componentwise with at least one strict component."""
    u, v = _check_pair(u, v)
    return bool(np.all(u <= v) and np.any(u < v))


def strictly_dominates(u, v) -> bool:
    u, v = _check_pair(u, v)
    return bool(np.all(u < v))


def dominated_by_any(f: np.ndarray, others: np.ndarray) -> bool:
    """Whether some row of ``others`` dominates ``f``."""
    if len(others) == 0:
        return False
    le = np.all(others <= f, axis=1)
    lt = np.any(others < f, axis=1)
    return bool(np.any(le & lt))


def dominance_matrix(F: np.ndarray, block: int = 1024) -> np.ndarray:
    """Boolean matrix ``D`` with ``D[i, j]`` true when row ``i`` dominates row ``j``."""
    F = np.asarray(F, dtype=float)
    N = len(F)
    D = np.empty((N, N), dtype=bool)
    for start in range(0, N, block):
        rows = F[start:start + block, None, :]
        D[start:start + block] = np.all(rows <= F[None], axis=2) & np.any(rows < F[None], axis=2)
    return D


def nondominated_mask(F: np.ndarray) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    if len(F) == 0:
        return np.zeros(0, dtype=bool)
    return ~dominance_matrix(F).any(axis=0)


def objective_matrix(points: Sequence[Individual], subset: Sequence[int] | None = None) -> np.ndarray:
    if not points:
        return np.zeros((0, 0 if subset is None else len(subset)))
    F = np.stack([p.fx for p in points])
    return F if subset is None else F[:, list(subset)]


def nondominated_subset(points: Sequence[Individual], subset: Iterable[int] | None = None) -> list[Individual]:
    """Members whose projection onto ``subset`` is not dominated by any other member.

    Input order is preserved. Equal objective vectors do not dominate each
    other, so duplicates survive together.
    """
    if not points:
        return []
    I = as_subset(subset, len(points[0].fx))
    mask = nondominated_mask(objective_matrix(points, I))
    return [p for p, keep in zip(points, mask) if keep]
