"""NSGA-II machinery: ranking, crowding, tournament selection, SBX crossover,
polynomial mutation and (mu + lambda) survivor selection.

Random draws happen in a fixed order per generation (permutations, tournament
tie-breaks, crossover draws, mutation draws, de-duplication draws) so a run is
reproducible bit for bit from its seed.
"""

from __future__ import annotations

import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .core import Individual, InvalidArgument, ProblemSpec, dominance_matrix, objective_matrix

RNG_ALGORITHM = "numpy.random.Philox(4x64-10)"


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based 64-bit generator used for every stochastic run."""
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True)
class GeneticParams:
    pop_size: int = 100
    crossover_prob: float = 0.9
    eta_c: float = 20.0
    mutation_prob: float | None = None  # None -> 1/n
    eta_m: float = 20.0
    dedup_retries: int = 3

    def __post_init__(self):
        if self.pop_size < 1:
            raise InvalidArgument("pop_size must be positive")
        if not 0 <= self.crossover_prob <= 1:
            raise InvalidArgument("crossover_prob must lie in [0, 1]")
        if self.mutation_prob is not None and not 0 <= self.mutation_prob <= 1:
            raise InvalidArgument("mutation_prob must lie in [0, 1]")
        if self.eta_c <= 0 or self.eta_m <= 0:
            raise InvalidArgument("distribution indices must be positive")
        if self.dedup_retries < 0:
            raise InvalidArgument("dedup_retries must be nonnegative")

    def pm(self, n: int) -> float:
        return 1.0 / n if self.mutation_prob is None else self.mutation_prob


@dataclass(frozen=True)
class RunBudget:
    """Stop after ``max_generations`` generations or at ``deadline`` (monotonic clock)."""

    max_generations: int | None = None
    deadline: float | None = None

    @classmethod
    def seconds(cls, sec: float, max_generations: int | None = None) -> RunBudget:
        return cls(max_generations, time.monotonic() + sec)

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() >= self.deadline

    def exhausted(self, generation: int) -> bool:
        if self.max_generations is not None and generation >= self.max_generations:
            return True
        return self.expired()


@dataclass(frozen=True, eq=False)
class RankedPopulation:
    members: list[Individual]
    rank: np.ndarray
    crowding: np.ndarray

    def __len__(self):
        return len(self.members)


def nondominated_ranks(F: np.ndarray) -> np.ndarray:
    """Domination level of every row (0 = non-dominated), by front peeling."""
    N = len(F)
    rank = np.full(N, -1, dtype=int)
    if N == 0:
        return rank
    D = dominance_matrix(F)
    count = D.sum(axis=0)
    current = np.flatnonzero(count == 0)
    level = 0
    while current.size:
        rank[current] = level
        count = count - D[current].sum(axis=0)
        count[rank >= 0] = -1
        current = np.flatnonzero(count == 0)
        level += 1
    return rank


def crowding_distance(F: np.ndarray) -> np.ndarray:
    """Crowding distance of the rows of one rank class.

    Per objective, the first and last members in sorted order get +inf;
    interior members add the normalized gap between their neighbours. An
    objective with zero (or non-finite) range contributes nothing.
    """
    N, m = F.shape
    dist = np.zeros(N)
    if N == 0:
        return dist
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        col = F[order, j]
        with np.errstate(invalid="ignore"):
            span = col[-1] - col[0]
        if N > 2 and np.isfinite(span) and span > 0:
            with np.errstate(invalid="ignore"):
                gaps = (col[2:] - col[:-2]) / span
            dist[order[1:-1]] += np.nan_to_num(gaps, nan=0.0, posinf=0.0)
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
    return dist


def get_metrics(pop: Sequence[Individual]) -> RankedPopulation:
    if not pop:
        raise InvalidArgument("population must be nonempty")
    F = objective_matrix(pop)
    rank = nondominated_ranks(F)
    crowd = np.zeros(len(pop))
    for r in np.unique(rank):
        idx = np.flatnonzero(rank == r)
        crowd[idx] = crowding_distance(F[idx])
    return RankedPopulation(list(pop), rank, crowd)


def get_survivors(rp: RankedPopulation, N: int) -> RankedPopulation:
    """Keep the best ``N`` members by (rank ascending, crowding descending)."""
    order = np.lexsort((-rp.crowding, rp.rank))[:N]
    return RankedPopulation([rp.members[i] for i in order], rp.rank[order], rp.crowding[order])


def _better(rp: RankedPopulation, a: int, b: int) -> int | None:
    if rp.rank[a] != rp.rank[b]:
        return a if rp.rank[a] < rp.rank[b] else b
    if rp.crowding[a] != rp.crowding[b]:
        return a if rp.crowding[a] > rp.crowding[b] else b
    return None


def get_parents(rp: RankedPopulation, N: int, rng: np.random.Generator) -> list[Individual]:
    """Binary tournaments over pairs taken from random permutations."""
    size = len(rp)
    if size == 0:
        raise InvalidArgument("population must be nonempty")
    pairs_per_perm = max(1, (size + 1) // 2)
    n_perm = -(-N // pairs_per_perm)
    pairs = []
    for _ in range(n_perm):
        perm = rng.permutation(size)
        if size % 2:
            perm = np.append(perm, perm[0])
        pairs.extend(zip(perm[0::2], perm[1::2]))
    pairs = pairs[:N]
    chosen = []
    for a, b in pairs:
        w = _better(rp, int(a), int(b))
        if w is None:
            w = int(a) if rng.random() < 0.5 else int(b)
        chosen.append(rp.members[w])
    return chosen


def crossover(parents: Sequence, lo, hi, params: GeneticParams, rng: np.random.Generator) -> list[np.ndarray]:
    """Simulated binary crossover (bounded form) on consecutive parent pairs."""
    P = np.stack([p.x if isinstance(p, Individual) else np.asarray(p, dtype=float) for p in parents])
    N, n = P.shape
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if N % 2:
        P = np.vstack([P, P[:1]])
    p1, p2 = P[0::2].copy(), P[1::2].copy()
    n_pairs = len(p1)

    do_cross = rng.random(n_pairs) <= params.crossover_prob
    gene_sel = rng.random((n_pairs, n)) <= 0.5
    u = rng.random((n_pairs, n))
    swap = rng.random((n_pairs, n)) <= 0.5

    y1 = np.minimum(p1, p2)
    y2 = np.maximum(p1, p2)
    diff = y2 - y1
    active = do_cross[:, None] & gene_sel & (diff > 1e-14)
    c1, c2 = p1.copy(), p2.copy()
    if active.any():
        eta = params.eta_c
        safe = np.where(active, diff, 1.0)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            beta1 = 1.0 + 2.0 * (y1 - lo) / safe
            beta2 = 1.0 + 2.0 * (hi - y2) / safe
            ch1 = 0.5 * ((y1 + y2) - _betaq(beta1, u, eta) * diff)
            ch2 = 0.5 * ((y1 + y2) + _betaq(beta2, u, eta) * diff)
        ch1 = np.clip(ch1, lo, hi)
        ch2 = np.clip(ch2, lo, hi)
        first = np.where(swap, ch2, ch1)
        second = np.where(swap, ch1, ch2)
        c1 = np.where(active, first, c1)
        c2 = np.where(active, second, c2)
    out = np.empty((2 * n_pairs, n))
    out[0::2] = c1
    out[1::2] = c2
    return [np.clip(row, lo, hi) for row in out[:N]]


def _betaq(beta, u, eta):
    alpha = 2.0 - beta ** -(eta + 1.0)
    low = u <= 1.0 / alpha
    return np.where(low, (u * alpha) ** (1.0 / (eta + 1.0)),
                    (1.0 / np.abs(2.0 - u * alpha)) ** (1.0 / (eta + 1.0)))


def _poly_mutate(X: np.ndarray, lo, hi, prob: float, eta: float, rng: np.random.Generator) -> np.ndarray:
    X = X.copy()
    mask = rng.random(X.shape) < prob
    r = rng.random(X.shape)
    span = hi - lo
    mask &= span > 0
    if not mask.any():
        return X
    safe = np.where(span > 0, span, 1.0)
    d1 = (X - lo) / safe
    d2 = (hi - X) / safe
    mp = 1.0 / (eta + 1.0)
    low = r < 0.5
    with np.errstate(invalid="ignore"):
        val_lo = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - d1) ** (eta + 1.0)
        val_hi = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - d2) ** (eta + 1.0)
        dq = np.where(low, val_lo ** mp - 1.0, 1.0 - val_hi ** mp)
    X = np.where(mask, X + dq * span, X)
    return np.clip(X, lo, hi)


def mutation(offspring: Sequence[np.ndarray], lo, hi, params: GeneticParams, rng: np.random.Generator,
             population: Sequence[np.ndarray] | None = None) -> list[np.ndarray]:
    """Polynomial mutation; with ``population`` given, also removes duplicates.

    A duplicate (equal to an earlier offspring or to a population member) is
    re-mutated on every gene up to ``dedup_retries`` times and then redrawn
    uniformly in the box.
    """
    if not offspring:
        return []
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    X = np.stack([np.asarray(o, dtype=float) for o in offspring])
    X = _poly_mutate(X, lo, hi, params.pm(X.shape[1]), params.eta_m, rng)
    out = [row for row in X]
    if population is None:
        return out
    seen = {np.asarray(p, dtype=float).tobytes() for p in population}
    for i, row in enumerate(out):
        for attempt in range(params.dedup_retries + 1):
            if row.tobytes() not in seen:
                break
            if attempt < params.dedup_retries:
                row = _poly_mutate(row[None], lo, hi, 1.0, params.eta_m, rng)[0]
            else:
                row = lo + rng.random(len(lo)) * (hi - lo)
        out[i] = row
        seen.add(row.tobytes())
    return out


def evolve(problem: ProblemSpec, rp: RankedPopulation, lo, hi, params: GeneticParams,
           rng: np.random.Generator) -> RankedPopulation:
    """One generation: parents, offspring inside ``[lo, hi]``, merge, re-rank (no truncation)."""
    N = params.pop_size
    parents = get_parents(rp, N, rng)
    kids = crossover(parents, lo, hi, params, rng)
    kids = mutation(kids, lo, hi, params, rng, population=[m.x for m in rp.members])
    offspring = [Individual.evaluate(problem, k) for k in kids]
    return get_metrics(rp.members + offspring)


def nsga2(problem: ProblemSpec, X0: Sequence[Individual], params: GeneticParams, budget: RunBudget,
          rng: np.random.Generator, trace: Callable[[dict], None] | None = None) -> list[Individual]:
    N = params.pop_size
    rp = get_survivors(get_metrics(list(X0)), N)
    k = 0
    while not budget.exhausted(k):
        merged = evolve(problem, rp, problem.lower, problem.upper, params, rng)
        rp = get_survivors(merged, N)
        k += 1
        if trace:
            trace({"generation": k, "objectives": objective_matrix(rp.members).tolist()})
    return rp.members
