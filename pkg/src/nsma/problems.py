"""Benchmark problems with analytic gradients and the hyper-diagonal initializer.

Shipped families: MAN (convex, two objectives), ZDT1-ZDT4 (Zitzler, Deb and
Thiele), MOP1 (Schaffer), MOP2 (Fonseca-Fleming) and MOP3 (Poloni, minimization
form). CEC09 identifiers are reserved but unsupported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Individual, InvalidArgument, ProblemSpec, Unsupported

SQRT_CLAMP = 1e-12

FAMILIES = ("MAN", "ZDT1", "ZDT2", "ZDT3", "ZDT4", "MOP1", "MOP2", "MOP3")
RESERVED = tuple(f"CEC09_{i}" for i in range(1, 11))


@dataclass(frozen=True)
class ProblemId:
    family: str
    n: int

    def __str__(self):
        return f"{self.family}_n{self.n}"


def _man(n: int) -> ProblemSpec:
    idx = np.arange(1, n + 1, dtype=float)

    def f(x):
        with np.errstate(over="ignore"):
            return np.array([np.sum((x - idx) ** 2) / n**2, np.sum(np.exp(-x) + x)])

    def jac(x):
        with np.errstate(over="ignore"):
            return np.vstack([2.0 * (x - idx) / n**2, 1.0 - np.exp(-x)])

    return ProblemSpec("MAN", n, 2, np.full(n, -1e4), np.full(n, 1e4), f, jac)


def _zdt_g(x):
    n = len(x)
    return 1.0 + 9.0 * np.sum(x[1:]) / (n - 1)


def _zdt_ratio(x1, g):
    return max(x1 / g, SQRT_CLAMP)


def _zdt_singular(x):
    return x[0] < 1e-8


def _zdt(family: str, n: int) -> ProblemSpec:
    if n < 2:
        raise Unsupported(f"{family} needs n >= 2")
    lower = np.zeros(n)
    upper = np.ones(n)
    dg = np.full(n - 1, 9.0 / (n - 1))

    if family == "ZDT4":
        lower = np.concatenate([[0.0], np.full(n - 1, -5.0)])
        upper = np.concatenate([[1.0], np.full(n - 1, 5.0)])

        def g_of(x):
            t = x[1:]
            return 1.0 + 10.0 * (n - 1) + np.sum(t**2 - 10.0 * np.cos(4.0 * np.pi * t))

        def dg_of(x):
            t = x[1:]
            return 2.0 * t + 40.0 * np.pi * np.sin(4.0 * np.pi * t)
    else:
        g_of = _zdt_g

        def dg_of(x):
            return dg

    def f(x):
        x1 = x[0]
        g = g_of(x)
        r = x1 / g
        if family == "ZDT2":
            h = 1.0 - r**2
        elif family == "ZDT3":
            h = 1.0 - np.sqrt(r) - r * np.sin(10.0 * np.pi * x1)
        else:
            h = 1.0 - np.sqrt(r)
        return np.array([x1, g * h])

    def jac(x):
        x1 = x[0]
        g = g_of(x)
        J = np.zeros((2, n))
        J[0, 0] = 1.0
        if family == "ZDT2":
            J[1, 0] = -2.0 * x1 / g
            J[1, 1:] = dg_of(x) * (1.0 + (x1 / g) ** 2)
            return J
        r = _zdt_ratio(x1, g)
        # f2 = g - sqrt(x1 g) [- x1 sin(10 pi x1) for ZDT3]
        J[1, 0] = -0.5 / np.sqrt(r)
        J[1, 1:] = dg_of(x) * (1.0 - 0.5 * np.sqrt(r))
        if family == "ZDT3":
            J[1, 0] -= np.sin(10.0 * np.pi * x1) + 10.0 * np.pi * x1 * np.cos(10.0 * np.pi * x1)
        return J

    singular = None if family == "ZDT2" else _zdt_singular
    return ProblemSpec(family, n, 2, lower, upper, f, jac, singular)


def _mop1(n: int) -> ProblemSpec:
    if n != 1:
        raise Unsupported("MOP1 is defined for n = 1 only")

    def f(x):
        return np.array([x[0] ** 2, (x[0] - 2.0) ** 2])

    def jac(x):
        return np.array([[2.0 * x[0]], [2.0 * (x[0] - 2.0)]])

    return ProblemSpec("MOP1", 1, 2, [-1e3], [1e3], f, jac)


def _mop2(n: int) -> ProblemSpec:
    s = 1.0 / np.sqrt(n)

    def f(x):
        return np.array([1.0 - np.exp(-np.sum((x - s) ** 2)), 1.0 - np.exp(-np.sum((x + s) ** 2))])

    def jac(x):
        e1 = np.exp(-np.sum((x - s) ** 2))
        e2 = np.exp(-np.sum((x + s) ** 2))
        return np.vstack([2.0 * (x - s) * e1, 2.0 * (x + s) * e2])

    return ProblemSpec("MOP2", n, 2, np.full(n, -4.0), np.full(n, 4.0), f, jac)


_A1 = 0.5 * np.sin(1) - 2 * np.cos(1) + np.sin(2) - 1.5 * np.cos(2)
_A2 = 1.5 * np.sin(1) - np.cos(1) + 2 * np.sin(2) - 0.5 * np.cos(2)


def _mop3(n: int) -> ProblemSpec:
    if n != 2:
        raise Unsupported("MOP3 is defined for n = 2 only")

    def parts(x):
        s1, c1, s2, c2 = np.sin(x[0]), np.cos(x[0]), np.sin(x[1]), np.cos(x[1])
        b1 = 0.5 * s1 - 2 * c1 + s2 - 1.5 * c2
        b2 = 1.5 * s1 - c1 + 2 * s2 - 0.5 * c2
        db1 = np.array([0.5 * c1 + 2 * s1, c2 + 1.5 * s2])
        db2 = np.array([1.5 * c1 + s1, 2 * c2 + 0.5 * s2])
        return b1, b2, db1, db2

    def f(x):
        b1, b2, _, _ = parts(x)
        return np.array([1.0 + (_A1 - b1) ** 2 + (_A2 - b2) ** 2, (x[0] + 3.0) ** 2 + (x[1] + 1.0) ** 2])

    def jac(x):
        b1, b2, db1, db2 = parts(x)
        g1 = -2.0 * (_A1 - b1) * db1 - 2.0 * (_A2 - b2) * db2
        g2 = np.array([2.0 * (x[0] + 3.0), 2.0 * (x[1] + 1.0)])
        return np.vstack([g1, g2])

    return ProblemSpec("MOP3", 2, 2, [-np.pi, -np.pi], [np.pi, np.pi], f, jac)


def make_problem(family: str, n: int) -> ProblemSpec:
    key = family.upper().replace("-", "_")
    if key in {"ZDT_1", "ZDT_2", "ZDT_3", "ZDT_4", "MOP_1", "MOP_2", "MOP_3"}:
        key = key.replace("_", "")
    if key in RESERVED:
        raise Unsupported(f"{family} is reserved but not implemented")
    if n < 1:
        raise InvalidArgument("n must be positive")
    if key == "MAN":
        return _man(n)
    if key in ("ZDT1", "ZDT2", "ZDT3", "ZDT4"):
        return _zdt(key, n)
    if key == "MOP1":
        return _mop1(n)
    if key == "MOP2":
        return _mop2(n)
    if key == "MOP3":
        return _mop3(n)
    raise Unsupported(f"unknown problem family {family!r}")


def initial_points(problem: ProblemSpec, count: int) -> list[Individual]:
    """Points spread uniformly along the diagonal of the bounding box.

    MOP1 always starts from the single point ``x = 0``.
    """
    if count < 1:
        raise InvalidArgument("count must be positive")
    if problem.name == "MOP1":
        return [Individual.evaluate(problem, np.zeros(problem.n))]
    l, u = problem.lower, problem.upper
    if count == 1:
        return [Individual.evaluate(problem, l + 0.5 * (u - l))]
    pts = []
    for j in range(count):
        x = l + (j / (count - 1)) * (u - l)
        pts.append(Individual.evaluate(problem, np.clip(x, l, u)))
    return pts


def registry() -> list[dict]:
    """Machine-readable listing of the shipped problems."""
    rows = []
    for fam in FAMILIES:
        if fam == "MOP1":
            n_min, n_max = 1, 1
        elif fam == "MOP3":
            n_min, n_max = 2, 2
        elif fam.startswith("ZDT"):
            n_min, n_max = 2, None
        else:
            n_min, n_max = 1, None
        p = make_problem(fam, n_min)
        rows.append({
            "name": fam,
            "n_min": n_min,
            "n_max": n_max,
            "m": p.m,
            "lower": p.lower.tolist() if fam in ("MOP1", "MOP3") else _bound_summary(fam, "lower"),
            "upper": p.upper.tolist() if fam in ("MOP1", "MOP3") else _bound_summary(fam, "upper"),
        })
    for name in RESERVED:
        rows.append({"name": name, "supported": False})
    return rows


def _bound_summary(fam: str, side: str):
    p = make_problem(fam, 3)
    b = p.lower if side == "lower" else p.upper
    if np.all(b == b[0]):
        return float(b[0])
    return {"first": float(b[0]), "rest": float(b[1])}
