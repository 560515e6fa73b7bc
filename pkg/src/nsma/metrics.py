"""Front quality metrics, reference fronts and Dolan-More performance profiles."""

from __future__ import annotations

import csv
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .core import InvalidArgument, Unsupported, dominance_matrix

log = logging.getLogger(__name__)

METRICS = ("purity", "gamma", "delta", "nd_points")
TABLE_COLUMNS = ("problem", "n", "solver", "purity", "gamma", "delta", "nd_points", "front_size",
                 "wall_seconds", "evals")
NA = "NA"


@dataclass(frozen=True, eq=False)
class FrontSet:
    label: str
    points: np.ndarray

    def __init__(self, label: str, points):
        P = np.asarray(points, dtype=float)
        if P.size == 0:
            P = P.reshape(0, P.shape[1] if P.ndim == 2 else 0)
        if P.ndim != 2:
            raise InvalidArgument("points must form a matrix")
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "points", P)

    def __len__(self):
        return len(self.points)

    @property
    def m(self) -> int:
        return self.points.shape[1]


def _dominated_by(P: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Mask of rows of ``P`` dominated by at least one row of ``R``."""
    if len(P) == 0 or len(R) == 0:
        return np.zeros(len(P), dtype=bool)
    le = np.all(R[:, None, :] <= P[None, :, :], axis=2)
    lt = np.any(R[:, None, :] < P[None, :, :], axis=2)
    return np.any(le & lt, axis=0)


def reference_front(fronts: Sequence[FrontSet], label: str = "reference") -> FrontSet:
    """Union of all points with duplicates and dominated points removed."""
    if not fronts:
        raise InvalidArgument("at least one front is required")
    dims = {f.m for f in fronts if len(f)}
    if len(dims) > 1:
        raise InvalidArgument(f"fronts disagree on the objective count: {sorted(dims)}")
    if not dims:
        return FrontSet(label, np.zeros((0, fronts[0].m)))
    P = np.vstack([f.points for f in fronts if len(f)])
    seen = set()
    keep = []
    for i, row in enumerate(P):
        key = row.tobytes()
        if key not in seen:
            seen.add(key)
            keep.append(i)
    P = P[keep]
    D = dominance_matrix(P)
    return FrontSet(label, P[~D.any(axis=0)])


def nd_points(front: FrontSet, reference: FrontSet) -> int:
    return int(np.count_nonzero(~_dominated_by(front.points, reference.points)))


def purity(front: FrontSet, reference: FrontSet) -> float | None:
    """Share of the front not dominated by the reference; None for an empty front."""
    if len(front) == 0:
        return None
    return nd_points(front, reference) / len(front)


def _extremes(reference: FrontSet) -> tuple[np.ndarray, np.ndarray]:
    R = reference.points
    if len(R) == 0:
        raise InvalidArgument("reference front is empty")
    best_f1 = R[np.lexsort((R[:, 1], R[:, 0]))[0]]
    best_f2 = R[np.lexsort((R[:, 0], R[:, 1]))[0]]
    return best_f1, best_f2


def _gaps(front: FrontSet, reference: FrontSet) -> np.ndarray:
    if front.m != 2 or reference.m != 2:
        raise Unsupported("spread metrics are defined for two objectives only")
    if len(front) == 0:
        raise InvalidArgument("front is empty")
    first, last = _extremes(reference)
    P = front.points[np.lexsort((front.points[:, 1], front.points[:, 0]))]
    chain = np.vstack([first, P, last])
    return np.max(np.abs(np.diff(chain, axis=0)), axis=1)


def gamma_spread(front: FrontSet, reference: FrontSet) -> float:
    """Largest infinity-norm gap between neighbours, the reference extremes included."""
    return float(np.max(_gaps(front, reference)))


def delta_spread(front: FrontSet, reference: FrontSet) -> float | None:
    """Deviation of the neighbour gaps; None when the front has fewer than two points."""
    if len(front) < 2:
        if front.m != 2:
            raise Unsupported("spread metrics are defined for two objectives only")
        return None
    g = _gaps(front, reference)
    d0, dN, inner = g[0], g[-1], g[1:-1]
    mean = inner.mean()
    num = d0 + dN + np.sum(np.abs(inner - mean))
    den = d0 + dN + len(inner) * mean
    if den == 0:
        return 0.0
    return float(num / den)


@dataclass
class MetricRow:
    problem: str
    n: int
    solver: str
    purity: float | None = None
    gamma: float | None = None
    delta: float | None = None
    nd_points: int | None = None
    front_size: int = 0
    wall_seconds: float | None = None
    evals: int | None = None

    def value(self, metric: str):
        if metric not in METRICS:
            raise InvalidArgument(f"unknown metric {metric!r}")
        return getattr(self, metric)


def evaluate_front(problem: str, n: int, front: FrontSet, reference: FrontSet, **extra) -> MetricRow:
    row = MetricRow(problem, n, front.label, front_size=len(front), **extra)
    row.nd_points = nd_points(front, reference)
    row.purity = purity(front, reference)
    if len(front) and front.m == 2 and len(reference):
        row.gamma = gamma_spread(front, reference)
        row.delta = delta_spread(front, reference)
    return row


@dataclass
class MetricTable:
    rows: list[MetricRow] = field(default_factory=list)

    def get(self, problem_key: str, solver: str) -> MetricRow | None:
        for r in self.rows:
            if _problem_key(r) == problem_key and r.solver == solver:
                return r
        return None

    def problems(self) -> list[str]:
        return sorted({_problem_key(r) for r in self.rows})

    def solvers(self) -> list[str]:
        return sorted({r.solver for r in self.rows})

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(TABLE_COLUMNS)
            for r in self.rows:
                w.writerow([_fmt(getattr(r, c)) for c in TABLE_COLUMNS])

    @classmethod
    def read_csv(cls, path) -> MetricTable:
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                rows.append(MetricRow(
                    problem=rec["problem"], n=int(rec["n"]), solver=rec["solver"],
                    purity=_parse(rec["purity"], float), gamma=_parse(rec["gamma"], float),
                    delta=_parse(rec["delta"], float), nd_points=_parse(rec["nd_points"], int),
                    front_size=int(rec["front_size"]), wall_seconds=_parse(rec["wall_seconds"], float),
                    evals=_parse(rec["evals"], int)))
        return cls(rows)


def _problem_key(r: MetricRow) -> str:
    return f"{r.problem}_n{r.n}"


def _fmt(v):
    if v is None:
        return NA
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse(s: str, kind):
    return None if s in ("", NA) else kind(s)


def _score(metric: str, value) -> float:
    """Smaller-is-better score; purity and ND-points are inverted."""
    if value is None:
        return math.inf
    value = float(value)
    if metric in ("purity", "nd_points"):
        return math.inf if value <= 0 else 1.0 / value
    return value if math.isfinite(value) else math.inf


def performance_profile(table: MetricTable, metric: str, solvers: Sequence[str] | None = None,
                        problems: Sequence[str] | None = None) -> dict[str, list[tuple[float, float]]]:
    """Dolan-More profile: for each solver, (tau, rho) pairs at every breakpoint.

    ``rho`` is the fraction of (retained) problems on which the solver's score
    is within a factor ``tau`` of the best score. Problems on which every
    solver failed are dropped with a warning. A best score of 0 gives ratio 1
    to the solvers that attain it and +inf to the others.
    """
    if metric not in METRICS:
        raise InvalidArgument(f"unknown metric {metric!r}")
    solvers = list(solvers) if solvers is not None else table.solvers()
    problems = list(problems) if problems is not None else table.problems()
    ratios: dict[str, list[float]] = {s: [] for s in solvers}
    kept = 0
    for p in problems:
        scores = {}
        for s in solvers:
            row = table.get(p, s)
            scores[s] = _score(metric, None if row is None else row.value(metric))
        best = min(scores.values())
        if not math.isfinite(best):
            log.warning("problem %s excluded from the %s profile: every solver failed", p, metric)
            continue
        kept += 1
        for s in solvers:
            t = scores[s]
            if best == 0:
                r = 1.0 if t == 0 else math.inf
            else:
                r = t / best
            ratios[s].append(r)
    out: dict[str, list[tuple[float, float]]] = {}
    if kept == 0:
        return {s: [] for s in solvers}
    taus = sorted({r for rs in ratios.values() for r in rs if math.isfinite(r)} | {1.0})
    for s in solvers:
        rs = np.asarray(ratios[s])
        out[s] = [(tau, float(np.count_nonzero(rs <= tau)) / kept) for tau in taus]
    return out


def write_profile_csv(profile: dict[str, list[tuple[float, float]]], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["solver", "tau", "rho"])
        for s in sorted(profile):
            for tau, rho in profile[s]:
                w.writerow([s, repr(float(tau)), repr(float(rho))])


def profile_at(samples: Iterable[tuple[float, float]], tau: float) -> float:
    """Evaluate a sampled profile step function at ``tau``."""
    rho = 0.0
    for t, r in samples:
        if t <= tau:
            rho = r
    return rho
