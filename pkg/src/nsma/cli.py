"""Command-line entry point: ``nsma-bench run|compare|profile|problems``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bench import DEFAULT_BUDGET, SOLVERS, GridMismatch, compare, profile, run
from .core import InvalidArgument
from .metrics import METRICS
from .problems import registry

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3


def _csv(kind):
    def parse(text: str):
        try:
            return [kind(t) for t in text.split(",") if t.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nsma-bench", description="Multi-objective solver benchmark harness.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one solver on one problem")
    r.add_argument("--solver", required=True, choices=SOLVERS)
    r.add_argument("--problem", required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--budget", type=float, default=DEFAULT_BUDGET, help="wall-clock seconds")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--generations", type=int, default=None, help="stop genetic solvers after this many generations")
    r.add_argument("--max-iters", type=int, default=None, help="stop FPGA after this many sweeps")
    r.add_argument("--pop-size", type=int, default=100)
    r.add_argument("--out", required=True)

    c = sub.add_parser("compare", help="compare solvers on a problem grid")
    c.add_argument("--solvers", type=_csv(str), required=True)
    c.add_argument("--problems", type=_csv(str), required=True)
    c.add_argument("--n-list", type=_csv(int), required=True)
    c.add_argument("--budget", type=float, default=DEFAULT_BUDGET)
    c.add_argument("--seeds", type=_csv(int), default=[1, 2, 3, 4, 5])
    c.add_argument("--generations", type=int, default=None)
    c.add_argument("--max-iters", type=int, default=None)
    c.add_argument("--pop-size", type=int, default=100)
    c.add_argument("--out", required=True)

    p = sub.add_parser("profile", help="performance profile from metric tables")
    p.add_argument("--tables", type=_csv(str), required=True)
    p.add_argument("--metric", choices=METRICS, required=True)
    p.add_argument("--out", required=True)

    pl = sub.add_parser("problems", help="problem registry")
    pl.add_argument("action", choices=["list"])
    pl.add_argument("--json", action="store_true")
    return ap


def _cmd_run(a) -> int:
    rec = run(a.solver, a.problem, a.n, a.budget, a.seed, generations=a.generations,
              pop_size=a.pop_size, max_iters=a.max_iters)
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    tag = f"_s{rec.seed}" if rec.seed is not None else ""
    path = out / f"{rec.problem}_n{rec.n}_{rec.solver}{tag}.json"
    path.write_text(rec.to_json())
    print(f"{rec.solver} {rec.problem} n={rec.n}: {len(rec.F)} points, {rec.iterations} iterations, "
          f"{rec.evals} evals, {rec.wall_seconds:.2f}s -> {path}")
    if rec.failed:
        print(f"run failed: {rec.message}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_compare(a) -> int:
    grid = [(p, n) for p in a.problems for n in a.n_list]
    res = compare(a.solvers, grid, a.budget, a.seeds, out=a.out, generations=a.generations,
                  pop_size=a.pop_size, max_iters=a.max_iters)
    print(f"wrote {Path(a.out) / 'metrics.csv'} ({len(res.table.rows)} rows)")
    if res.failures:
        for f in res.failures:
            print(f"failed: {f}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_profile(a) -> int:
    prof = profile(a.tables, a.metric, a.out)
    print(f"wrote {a.out} ({sum(len(v) for v in prof.values())} samples)")
    return EXIT_OK


def _cmd_problems(a) -> int:
    rows = registry()
    if a.json:
        print(json.dumps(rows, indent=1))
    else:
        for r in rows:
            if r.get("supported", True):
                hi = "inf" if r["n_max"] is None else r["n_max"]
                print(f"{r['name']:8s} n in [{r['n_min']}, {hi}]  m={r['m']}")
            else:
                print(f"{r['name']:8s} (reserved, unsupported)")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handlers = {"run": _cmd_run, "compare": _cmd_compare, "profile": _cmd_profile, "problems": _cmd_problems}
    try:
        return handlers[args.command](args)
    except GridMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InvalidArgument, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
