"""Dense two-phase primal simplex for small LPs with explicit variable bounds.

Solves ``min c.w  s.t.  A w <= b,  lo <= w <= hi``. Instances produced by the
direction subproblems have a handful of rows and ``n + 1`` columns, so the
basis is refactorized from scratch at every pivot.

Structural variables whose box strictly contains zero start nonbasic at zero
("free" status) and may leave it in either direction; every other nonbasic
variable sits at one of its bounds. Starting at the origin keeps the
direction subproblems feasible from the first pivot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import InvalidArgument, NumericFailure

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9
DUAL_TOL = 1e-10
BLAND_AFTER = 50

_BASIC, _LOWER, _UPPER, _FREE = 0, 1, 2, 3


@dataclass(frozen=True, eq=False)
class BoundedLp:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        p = len(c)
        A = np.asarray(self.A, dtype=float)
        if A.size == 0:
            A = np.zeros((0, p))
        elif A.ndim != 2:
            raise InvalidArgument("A must be a matrix")
        b = np.asarray(self.b, dtype=float).reshape(-1)
        lo = np.asarray(self.lo, dtype=float).reshape(-1)
        hi = np.asarray(self.hi, dtype=float).reshape(-1)
        if A.shape != (len(b), p) or lo.shape != (p,) or hi.shape != (p,):
            raise InvalidArgument("inconsistent LP dimensions")
        if not all(np.all(np.isfinite(a)) for a in (c, A, b, lo, hi)):
            raise InvalidArgument("LP data must be finite")
        if np.any(lo > hi):
            raise InvalidArgument("lo must not exceed hi")
        for name, val in zip("c A b lo hi".split(), (c, A, b, lo, hi)):
            object.__setattr__(self, name, val)


class LpSolution(NamedTuple):
    status: str  # "optimal" | "infeasible" | "unbounded"
    w: np.ndarray | None
    objective: float | None


class DirectionResult(NamedTuple):
    theta: float
    d: np.ndarray


def _simplex(M, b, L, U, cost, basis, status, x, max_iter):
    """Run bounded primal simplex in place. Returns "optimal" or "unbounded"."""
    q, P = M.shape
    degenerate = 0
    movable = U > L
    for _ in range(max_iter):
        nb = status != _BASIC
        if q:
            Binv = np.linalg.inv(M[:, basis])
            x[basis] = Binv @ (b - M[:, nb] @ x[nb])
            red = cost - (cost[basis] @ Binv) @ M
        else:
            red = cost.copy()
        eligible = movable & (((status == _LOWER) & (red < -DUAL_TOL)) | ((status == _UPPER) & (red > DUAL_TOL))
                              | ((status == _FREE) & (np.abs(red) > DUAL_TOL)))
        if not eligible.any():
            return "optimal"
        cand = np.flatnonzero(eligible)
        if degenerate >= BLAND_AFTER:
            j = int(cand[0])
        else:
            j = int(cand[np.argmax(np.abs(red[cand]))])
        sigma = -1.0 if red[j] > 0 else 1.0

        step = U[j] - x[j] if sigma > 0 else x[j] - L[j]
        leave = -1
        if q:
            rate = -sigma * (Binv @ M[:, j])
            for i in range(q):
                r = rate[i]
                v = basis[i]
                if r < -PIVOT_TOL:
                    lim = (x[v] - L[v]) / -r
                elif r > PIVOT_TOL and np.isfinite(U[v]):
                    lim = (U[v] - x[v]) / r
                else:
                    continue
                lim = max(lim, 0.0)
                if lim < step - 1e-12 or (leave >= 0 and abs(lim - step) <= 1e-12 and v < basis[leave]):
                    step, leave = lim, i
        else:
            rate = np.zeros(0)
        if not np.isfinite(step):
            return "unbounded"

        x[j] += sigma * step
        if q:
            x[basis] += rate * step
        if leave < 0:
            status[j] = _UPPER if sigma > 0 else _LOWER
            x[j] = U[j] if sigma > 0 else L[j]
        else:
            v = basis[leave]
            if rate[leave] < 0:
                status[v], x[v] = _LOWER, L[v]
            else:
                status[v], x[v] = _UPPER, U[v]
            basis[leave] = j
            status[j] = _BASIC
        degenerate = degenerate + 1 if step <= 1e-12 else 0
    raise NumericFailure("simplex iteration cap exceeded", incumbent=x.copy())


def solve_bounded_lp(prob: BoundedLp, max_iter: int | None = None) -> LpSolution:
    c, A, b, lo, hi = prob.c, prob.A, prob.b, prob.lo, prob.hi
    q, p = A.shape
    if max_iter is None:
        max_iter = 200 * (p + q) + 1000

    # Structurals start at zero when it is interior, else at the bound closest to zero.
    interior = (lo < 0) & (hi > 0)
    w0 = np.where(interior, 0.0, np.where(np.abs(lo) <= np.abs(hi), lo, hi))
    resid = b - A @ w0
    art_rows = np.flatnonzero(resid < 0)
    n_art = len(art_rows)

    E = np.zeros((q, n_art))
    E[art_rows, np.arange(n_art)] = -1.0
    M = np.hstack([A, np.eye(q), E])
    P = p + q + n_art
    L = np.concatenate([lo, np.zeros(q + n_art)])
    U = np.concatenate([hi, np.full(q + n_art, np.inf)])

    x = np.zeros(P)
    x[:p] = w0
    status = np.full(P, _LOWER, dtype=np.int8)
    status[:p] = np.where(interior, _FREE, np.where(w0 == lo, _LOWER, _UPPER))
    basis = np.empty(q, dtype=int)
    for i in range(q):
        basis[i] = p + i
    for k, i in enumerate(art_rows):
        basis[i] = p + q + k
    status[basis] = _BASIC
    x[basis] = np.abs(resid)

    try:
        if n_art:
            cost1 = np.zeros(P)
            cost1[p + q:] = 1.0
            _simplex(M, b, L, U, cost1, basis, status, x, max_iter)
            infeas = x[p + q:].sum()
            if infeas > FEAS_TOL * max(1.0, float(np.max(np.abs(b), initial=0.0))):
                return LpSolution("infeasible", None, None)
            U[p + q:] = 0.0
            nonbasic_art = (status[p + q:] != _BASIC)
            status[p + q:][nonbasic_art] = _LOWER
            x[p + q:][nonbasic_art] = 0.0
        cost2 = np.concatenate([c, np.zeros(q + n_art)])
        result = _simplex(M, b, L, U, cost2, basis, status, x, max_iter)
    except NumericFailure as exc:
        w = np.clip(exc.incumbent[:p], lo, hi)
        raise NumericFailure(str(exc), incumbent=w) from None
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(f"singular basis: {exc}", incumbent=np.clip(x[:p], lo, hi)) from None
    if result == "unbounded":
        return LpSolution("unbounded", None, None)

    w = np.clip(x[:p], lo, hi)
    if q and np.any(A @ w > b + FEAS_TOL * (1.0 + np.abs(b))):
        raise NumericFailure("simplex returned a row-infeasible point", incumbent=w)
    return LpSolution("optimal", w, float(c @ w))


def solve_minimax_box(G, lo, hi) -> DirectionResult:
    """Minimize ``max_j G[j] @ d`` over the box ``lo <= d <= hi``.

    The box must contain the origin, so the optimal value is never positive.
    Solved as ``min beta  s.t.  G d - beta <= 0`` with ``beta`` confined to
    ``[-Theta, 0]`` where ``Theta`` bounds ``|G d|`` over the box.
    """
    G = np.atleast_2d(np.asarray(G, dtype=float))
    lo = np.asarray(lo, dtype=float).reshape(-1)
    hi = np.asarray(hi, dtype=float).reshape(-1)
    k, n = G.shape
    if k < 1 or lo.shape != (n,) or hi.shape != (n,):
        raise InvalidArgument("inconsistent minimax dimensions")
    if np.any(lo > 0) or np.any(hi < 0):
        raise InvalidArgument("box must contain the origin (lo <= 0 <= hi)")
    if not np.all(np.isfinite(G)):
        raise NumericFailure("non-finite gradient")

    if k == 1:
        # One row: each coordinate independently goes to the bound that lowers g.d.
        g = G[0]
        d = np.where(g > 0, lo, np.where(g < 0, hi, 0.0))
        theta = float(g @ d)
        if theta >= 0.0:
            return DirectionResult(0.0, np.zeros(n))
        return DirectionResult(theta, d)

    big = float(np.sum(np.max(np.abs(G), axis=0) * np.maximum(np.abs(lo), np.abs(hi))))
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A = np.hstack([G, -np.ones((k, 1))])
    sol = solve_bounded_lp(BoundedLp(c, A, np.zeros(k), np.append(lo, -big), np.append(hi, 0.0)))
    if sol.status != "optimal":
        raise NumericFailure(f"direction LP reported {sol.status}")
    d = sol.w[:n]
    theta = float(np.max(G @ d))
    if theta >= 0.0:
        return DirectionResult(0.0, np.zeros(n))
    return DirectionResult(theta, d)
