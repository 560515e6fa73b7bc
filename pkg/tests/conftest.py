"""Independent oracles and small fixture problems shared by the test modules."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from nsma.core import ProblemSpec


def brute_dominates(u, v) -> bool:
    """Pairwise dominance written out with plain Python loops."""
    le = all(a <= b for a, b in zip(u, v))
    lt = any(a < b for a, b in zip(u, v))
    return le and lt


def brute_levels(F) -> list[int]:
    """Domination level by repeated removal of the non-dominated rows."""
    F = [tuple(r) for r in F]
    remaining = set(range(len(F)))
    level = [None] * len(F)
    k = 0
    while remaining:
        front = [i for i in remaining if not any(brute_dominates(F[j], F[i]) for j in remaining if j != i)]
        for i in front:
            level[i] = k
        remaining -= set(front)
        k += 1
    return level


def brute_crowding(F) -> list[float]:
    """Textbook crowding distance of one rank class."""
    F = np.asarray(F, dtype=float)
    N, m = F.shape
    dist = [0.0] * N
    for j in range(m):
        order = sorted(range(N), key=lambda i: (F[i, j], i))
        fmin, fmax = F[order[0], j], F[order[-1], j]
        for pos in range(1, N - 1):
            if fmax > fmin:
                dist[order[pos]] += (F[order[pos + 1], j] - F[order[pos - 1], j]) / (fmax - fmin)
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
    return dist


def vertex_minimax(G, lo, hi) -> float:
    """Minimum of max_j G_j.d over the box by enumerating arrangement vertices.

    The optimum of the epigraph LP sits where ``n`` independent hyperplanes
    meet, chosen among the box faces and the equal-value planes
    ``(G_a - G_b).d = 0``.
    """
    G = np.atleast_2d(np.asarray(G, dtype=float))
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    k, n = G.shape
    planes = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        planes.append((e, lo[i]))
        planes.append((e, hi[i]))
    for a, b in itertools.combinations(range(k), 2):
        planes.append((G[a] - G[b], 0.0))
    best = np.inf
    tol = 1e-9
    for combo in itertools.combinations(planes, n):
        A = np.array([p[0] for p in combo])
        rhs = np.array([p[1] for p in combo])
        if abs(np.linalg.det(A)) < 1e-12:
            continue
        d = np.linalg.solve(A, rhs)
        if np.all(d >= lo - tol) and np.all(d <= hi + tol):
            best = min(best, float(np.max(G @ np.clip(d, lo, hi))))
    return best


def vertex_lp(c, A, b, lo, hi) -> float | None:
    """Optimal value of min c.w s.t. A w <= b, lo <= w <= hi by vertex enumeration (None if infeasible)."""
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float)) if len(b) else np.zeros((0, len(c)))
    b = np.asarray(b, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    p = len(c)
    planes = [(row, bi) for row, bi in zip(A, b)]
    for i in range(p):
        e = np.zeros(p)
        e[i] = 1.0
        planes.append((e, lo[i]))
        planes.append((e, hi[i]))
    best = None
    for combo in itertools.combinations(planes, p):
        M = np.array([q[0] for q in combo])
        r = np.array([q[1] for q in combo])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        w = np.linalg.solve(M, r)
        if np.all(w >= lo - 1e-9) and np.all(w <= hi + 1e-9) and (len(b) == 0 or np.all(A @ w <= b + 1e-9)):
            v = float(c @ w)
            best = v if best is None else min(best, v)
    return best


def grid_minimax(G, lo, hi, step=1e-2) -> float:
    """Dense grid search for min over the box of max_j G_j.d."""
    G = np.atleast_2d(np.asarray(G, dtype=float))
    axes = [np.unique(np.concatenate([np.arange(l, h, step), [l, h]])) for l, h in zip(lo, hi)]
    mesh = np.meshgrid(*axes[1:], indexing="ij") if len(axes) > 1 else []
    rest = np.stack([m.ravel() for m in mesh], axis=1) if mesh else np.zeros((1, 0))
    partial = rest @ G[:, 1:].T
    best = np.inf
    for v in axes[0]:
        best = min(best, float(np.min(np.max(partial + v * G[:, 0], axis=1))))
    return best


def fd_jacobian(f, x, m) -> np.ndarray:
    """Central differences with step 1e-6 * (1 + |x_i|)."""
    x = np.asarray(x, dtype=float)
    J = np.zeros((m, len(x)))
    for i in range(len(x)):
        h = 1e-6 * (1.0 + abs(x[i]))
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        J[:, i] = (np.asarray(f(xp)) - np.asarray(f(xm))) / (2 * h)
    return J


def biobjective_line(lo=-10.0, hi=10.0) -> ProblemSpec:
    """f1 = x^2, f2 = (x - 2)^2 on a 1-D interval."""
    return ProblemSpec("line", 1, 2, [lo], [hi],
                       lambda x: np.array([x[0] ** 2, (x[0] - 2.0) ** 2]),
                       lambda x: np.array([[2.0 * x[0]], [2.0 * (x[0] - 2.0)]]))


def scalar_problem(f, g, lo, hi) -> ProblemSpec:
    """Single-objective problem from a scalar function and its gradient."""
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    return ProblemSpec("scalar", len(lo), 1, lo, hi,
                       lambda x: np.array([f(x)]), lambda x: np.atleast_2d(g(x)))


@pytest.fixture
def line_problem():
    return biobjective_line()
