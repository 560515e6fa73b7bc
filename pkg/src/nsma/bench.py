"""Experiment orchestration: seeded runs, best-of-k selection, comparisons and profiles."""

from __future__ import annotations

import dataclasses
import json
import logging
import os
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Individual, InvalidArgument, NumericFailure, ProblemSpec, nondominated_mask
from .descent import DescentBudget, fpga
from .genetic import RNG_ALGORITHM, GeneticParams, RunBudget, make_rng, nsga2
from .linesearch import LineSearchFailure
from .memetic import NsmaParams, nsma_run
from .metrics import FrontSet, MetricRow, MetricTable, evaluate_front, performance_profile, reference_front, \
    purity, write_profile_csv
from .problems import initial_points, make_problem

log = logging.getLogger(__name__)

SOLVERS = ("nsma", "nsga2", "fpga")
STOCHASTIC = ("nsma", "nsga2")
WORKERS_ENV = "NSMA_WORKERS"
DEFAULT_BUDGET = 120.0
DEFAULT_SEEDS = (1, 2, 3, 4, 5)


class RunFailure(RuntimeError):
    """Every run of a best-of-k selection failed."""


class GridMismatch(InvalidArgument):
    """Metric tables do not cover the same (problem, solver) grid."""


@dataclass
class RunRecord:
    solver: str
    problem: str
    n: int
    seed: int | None
    budget_seconds: float
    X: np.ndarray
    F: np.ndarray
    wall_seconds: float = 0.0
    evals: int = 0
    iterations: int = 0
    failed: bool = False
    message: str = ""

    @property
    def front(self) -> FrontSet:
        return FrontSet(self.solver, self.F)

    def to_json(self) -> str:
        """Front file contents; timing is left out so reruns are byte-identical."""
        doc = {
            "solver": self.solver,
            "problem": self.problem,
            "n": self.n,
            "seed": self.seed,
            "rng": RNG_ALGORITHM if self.solver in STOCHASTIC else None,
            "points": [{"x": [float(v) for v in x], "F": [float(v) for v in f]} for x, f in zip(self.X, self.F)],
        }
        return json.dumps(doc, indent=1) + "\n"


def parse_front(text: str) -> dict:
    """Inverse of :meth:`RunRecord.to_json`; vectors come back as float arrays."""
    doc = json.loads(text)
    m = len(doc["points"][0]["F"]) if doc["points"] else 0
    n = len(doc["points"][0]["x"]) if doc["points"] else doc["n"]
    doc["X"] = np.array([p["x"] for p in doc["points"]], dtype=float).reshape(-1, n)
    doc["F"] = np.array([p["F"] for p in doc["points"]], dtype=float).reshape(-1, m)
    return doc


def _counting(problem: ProblemSpec) -> tuple[ProblemSpec, list[int]]:
    counter = [0]
    inner = problem.eval

    def eval_(x):
        counter[0] += 1
        return inner(x)

    return dataclasses.replace(problem, eval=eval_), counter


def _final_front(pop: Sequence[Individual], n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    if not pop:
        return np.zeros((0, n)), np.zeros((0, m))
    X = np.stack([p.x for p in pop])
    F = np.stack([p.fx for p in pop])
    finite = np.all(np.isfinite(F), axis=1)
    X, F = X[finite], F[finite]
    mask = nondominated_mask(F) if len(F) else np.zeros(0, dtype=bool)
    return X[mask], F[mask]


def run(solver: str, problem: str, n: int, budget_seconds: float = DEFAULT_BUDGET, seed: int | None = None,
        generations: int | None = None, pop_size: int = 100, max_iters: int | None = None) -> RunRecord:
    """Run one solver on one problem from the hyper-diagonal starting points.

    ``generations`` (genetic solvers) and ``max_iters`` (FPGA sweeps) add a
    count-based stop on top of the wall-clock budget, which makes runs
    reproducible regardless of machine speed.
    """
    if solver not in SOLVERS:
        raise InvalidArgument(f"unknown solver {solver!r}; choose from {', '.join(SOLVERS)}")
    if budget_seconds <= 0:
        raise InvalidArgument("budget must be positive")
    base = make_problem(problem, n)
    spec, counter = _counting(base)
    X0 = initial_points(spec, n)
    if solver in STOCHASTIC and seed is None:
        raise InvalidArgument(f"{solver} needs a seed")
    rec_seed = seed if solver in STOCHASTIC else None
    iters = [0]

    def tick(_):
        iters[0] += 1

    start = time.monotonic()
    deadline = start + budget_seconds
    failed, message, pop = False, "", []
    try:
        if solver == "fpga":
            F0 = np.stack([p.fx for p in X0])
            X0 = [p for p, keep in zip(X0, nondominated_mask(F0)) if keep]
            budget = DescentBudget(max_iters if max_iters is not None else 10**9, 0.0, deadline)
            pop = fpga(spec, X0, budget, trace=tick)
        else:
            params = GeneticParams(pop_size=pop_size)
            rb = RunBudget(generations, deadline)
            rng = make_rng(seed)
            if solver == "nsga2":
                pop = nsga2(spec, X0, params, rb, rng, trace=tick)
            else:
                pop = nsma_run(spec, X0, NsmaParams(genetic=params), rb, rng, trace=tick)
    except (NumericFailure, LineSearchFailure, FloatingPointError) as exc:
        failed, message = True, f"{type(exc).__name__}: {exc}"
        log.warning("%s on %s n=%d failed: %s", solver, problem, n, message)
    wall = time.monotonic() - start
    X, F = _final_front(pop, base.n, base.m)
    return RunRecord(solver, base.name, n, rec_seed, budget_seconds, X, F, wall, counter[0], iters[0],
                     failed or len(F) == 0, message or ("" if len(F) else "empty front"))


def select_best(records: Sequence[RunRecord]) -> RunRecord:
    """Highest purity against the union of the runs' fronts; ties go to the lowest seed."""
    ok = [r for r in records if not r.failed]
    if not ok:
        raise RunFailure("every run failed")
    ref = reference_front([r.front for r in ok])
    return max(sorted(ok, key=lambda r: r.seed), key=lambda r: purity(r.front, ref))


def best_of_k(solver: str, problem: str, n: int, budget_seconds: float = DEFAULT_BUDGET,
              seeds: Sequence[int] = DEFAULT_SEEDS, **kwargs) -> RunRecord:
    if not seeds:
        raise InvalidArgument("at least one seed is required")
    return select_best([run(solver, problem, n, budget_seconds, s, **kwargs) for s in seeds])


def _run_job(job):
    solver, problem, n, budget, seed, kwargs = job
    return run(solver, problem, n, budget, seed, **kwargs)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        raise InvalidArgument(f"{WORKERS_ENV} must be an integer") from None


@dataclass
class CompareResult:
    table: MetricTable
    chosen: dict[tuple[str, int, str], RunRecord] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)


def compare(solvers: Sequence[str], problems: Sequence[tuple[str, int]], budget_seconds: float,
            seeds: Sequence[int] = DEFAULT_SEEDS, out: str | Path | None = None,
            workers: int | None = None, **kwargs) -> CompareResult:
    """Run every solver on every (problem, n) pair and score them against a joint reference."""
    if not solvers or not problems:
        raise InvalidArgument("solvers and problems must be nonempty")
    for s in solvers:
        if s not in SOLVERS:
            raise InvalidArgument(f"unknown solver {s!r}")
    for name, n in problems:
        make_problem(name, n)
    jobs = []
    for name, n in problems:
        for s in solvers:
            for seed in (seeds if s in STOCHASTIC else [None]):
                jobs.append((s, name, n, budget_seconds, seed, kwargs))
    workers = worker_count() if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_job, jobs))
    else:
        records = [_run_job(j) for j in jobs]
    records.sort(key=lambda r: (r.problem, r.n, r.solver, -1 if r.seed is None else r.seed))

    result = CompareResult(MetricTable())
    for name, n in problems:
        pname = make_problem(name, n).name
        chosen = {}
        for s in solvers:
            group = [r for r in records if r.problem == pname and r.n == n and r.solver == s]
            try:
                chosen[s] = select_best(group)
            except RunFailure:
                result.failures.append(f"{pname} n={n} {s}")
        ref = reference_front([r.front for r in chosen.values()]) if chosen else None
        for s in solvers:
            rec = chosen.get(s)
            if rec is None:
                result.table.rows.append(MetricRow(pname, n, s))
                continue
            result.chosen[(pname, n, s)] = rec
            result.table.rows.append(evaluate_front(pname, n, rec.front, ref, wall_seconds=rec.wall_seconds,
                                                    evals=rec.evals))
    if out is not None:
        write_outputs(result, out)
    return result


def write_outputs(result: CompareResult, out: str | Path) -> None:
    out = Path(out)
    (out / "fronts").mkdir(parents=True, exist_ok=True)
    for (pname, n, s), rec in sorted(result.chosen.items()):
        (out / "fronts" / f"{pname}_n{n}_{s}.json").write_text(rec.to_json())
    result.table.write_csv(out / "metrics.csv")


def check_grid(table: MetricTable) -> list[str]:
    """Missing or duplicated (problem, solver) cells, as human-readable strings."""
    problems, solvers = table.problems(), table.solvers()
    issues = []
    for p in problems:
        for s in solvers:
            hits = sum(1 for r in table.rows if f"{r.problem}_n{r.n}" == p and r.solver == s)
            if hits == 0:
                issues.append(f"missing {p} / {s}")
            elif hits > 1:
                issues.append(f"duplicate {p} / {s}")
    return issues


def profile(table_files: Sequence[str | Path], metric: str, out: str | Path) -> dict:
    rows = []
    for f in table_files:
        rows.extend(MetricTable.read_csv(f).rows)
    table = MetricTable(rows)
    issues = check_grid(table)
    if issues:
        raise GridMismatch("metric tables do not share one grid: " + "; ".join(issues))
    prof = performance_profile(table, metric)
    write_profile_csv(prof, out)
    return prof
