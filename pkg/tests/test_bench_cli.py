import json

import numpy as np
import pytest

from nsma.bench import (
    GridMismatch,
    RunFailure,
    RunRecord,
    best_of_k,
    compare,
    parse_front,
    profile,
    run,
    select_best,
)
from nsma.cli import main
from nsma.core import InvalidArgument
from nsma.metrics import FrontSet, MetricRow, MetricTable, evaluate_front


def record(seed, F, solver="nsma", failed=False):
    F = np.asarray(F, dtype=float).reshape(-1, 2)
    return RunRecord(solver, "ZDT1", 2, seed, 1.0, np.zeros((len(F), 2)), F, failed=failed)


def test_run_is_seed_deterministic():
    a = run("nsma", "ZDT1", 5, 60, seed=42, generations=6, pop_size=12)
    b = run("nsma", "ZDT1", 5, 60, seed=42, generations=6, pop_size=12)
    assert a.to_json() == b.to_json()
    assert a.iterations == 6
    assert '"rng": "numpy.random.Philox' in a.to_json()


def test_fpga_run_is_deterministic_and_ignores_seed():
    a = run("fpga", "MAN", 5, 60, max_iters=3)
    b = run("fpga", "MAN", 5, 60, seed=99, max_iters=3)
    assert a.to_json() == b.to_json()
    assert a.seed is None


def test_mop1_front_is_feasible():
    rec = run("nsma", "MOP1", 1, 1.0, seed=7, pop_size=20)
    assert 1 <= len(rec.F) <= 20
    assert np.all(rec.X >= -1e3) and np.all(rec.X <= 1e3)
    assert rec.wall_seconds < 1.0 + 5.0


def test_run_validation():
    with pytest.raises(InvalidArgument):
        run("nsma", "ZDT1", 5, 1.0)
    with pytest.raises(InvalidArgument):
        run("simplex", "ZDT1", 5, 1.0, seed=1)
    with pytest.raises(InvalidArgument):
        run("nsga2", "MOP1", 3, 1.0, seed=1)


def test_front_json_round_trip():
    rec = run("nsga2", "ZDT3", 4, 60, seed=3, generations=4, pop_size=10)
    doc = parse_front(rec.to_json())
    assert doc["X"].tobytes() == rec.X.tobytes()
    assert doc["F"].tobytes() == rec.F.tobytes()
    assert (doc["solver"], doc["problem"], doc["n"], doc["seed"]) == ("nsga2", "ZDT3", 4, 3)
    odd = RunRecord("nsga2", "P", 1, 1, 1.0, np.array([[0.1 + 0.2]]), np.array([[1 / 3, 2e-308]]))
    back = parse_front(odd.to_json())
    assert back["X"].tobytes() == odd.X.tobytes() and back["F"].tobytes() == odd.F.tobytes()


def test_select_best_rules():
    same = [(0, 1), (1, 0)]
    assert select_best([record(5, same), record(2, same)]).seed == 2
    a = record(1, [(0, 1), (1, 0)])
    b = record(2, [(0, 1), (2, 2)])
    assert select_best([b, a]) is a
    with pytest.raises(RunFailure):
        select_best([record(1, [(0, 0)], failed=True)])


def test_best_of_one_equals_run():
    a = best_of_k("nsga2", "ZDT1", 3, 60, seeds=[4], generations=3, pop_size=8)
    b = run("nsga2", "ZDT1", 3, 60, seed=4, generations=3, pop_size=8)
    assert a.to_json() == b.to_json()


def test_compare_single_solver_self_reference(tmp_path):
    res = compare(["nsga2"], [("ZDT1", 4)], 60, seeds=[1, 2], out=tmp_path, generations=3, pop_size=8)
    row = res.table.rows[0]
    assert row.purity == 1.0
    assert row.purity * row.front_size == row.nd_points
    assert (tmp_path / "metrics.csv").exists()
    assert (tmp_path / "fronts" / "ZDT1_n4_nsga2.json").exists()


def test_delta_unavailable_for_single_point_record():
    row = evaluate_front("P", 1, FrontSet("s", [[0.5, 0.5]]), FrontSet("r", [[0.0, 1.0], [1.0, 0.0]]))
    assert row.delta is None and row.purity == 1.0


def test_parallel_and_serial_compare_identical(tmp_path, monkeypatch):
    kw = dict(seeds=[1, 2], generations=4, pop_size=8)
    serial = compare(["nsga2", "nsma"], [("ZDT2", 3)], 60, out=tmp_path / "s", workers=1, **kw)
    monkeypatch.setenv("NSMA_WORKERS", "2")
    parallel = compare(["nsga2", "nsma"], [("ZDT2", 3)], 60, out=tmp_path / "p", **kw)
    for name in ("ZDT2_n3_nsga2.json", "ZDT2_n3_nsma.json"):
        assert (tmp_path / "s" / "fronts" / name).read_bytes() == (tmp_path / "p" / "fronts" / name).read_bytes()
    assert [r.purity for r in serial.table.rows] == [r.purity for r in parallel.table.rows]


def _write_table(path, cells):
    MetricTable([MetricRow(p, 5, s, purity=v, gamma=v, delta=v, nd_points=1, front_size=1) for p, s, v in cells]
                ).write_csv(path)


def test_profile_grid_mismatch(tmp_path):
    _write_table(tmp_path / "a.csv", [("P", "A", 1.0), ("P", "B", 0.5)])
    _write_table(tmp_path / "b.csv", [("Q", "A", 1.0)])
    with pytest.raises(GridMismatch) as exc:
        profile([tmp_path / "a.csv", tmp_path / "b.csv"], "purity", tmp_path / "out.csv")
    assert "Q_n5 / B" in str(exc.value)


def test_profile_from_tables(tmp_path):
    _write_table(tmp_path / "a.csv", [("P", "A", 1.0), ("P", "B", 2.0)])
    prof = profile([tmp_path / "a.csv"], "gamma", tmp_path / "out.csv")
    assert prof["A"][0] == (1.0, 1.0)
    lines = (tmp_path / "out.csv").read_text().splitlines()
    assert lines[0] == "solver,tau,rho"


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["problems", "list", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert any(r["name"] == "MAN" for r in rows)
    assert main(["problems", "list"]) == 0
    assert main(["run", "--solver", "nsga2", "--problem", "MOP1", "--n", "4", "--seed", "1",
                 "--out", str(tmp_path)]) == 2
    assert main(["run", "--solver", "nsga2", "--problem", "ZDT1", "--n", "3", "--seed", "1",
                 "--generations", "2", "--pop-size", "6", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "ZDT1_n3_nsga2_s1.json").exists()
    assert main(["compare", "--solvers", "nsga2,fpga", "--problems", "ZDT1", "--n-list", "3", "--seeds", "1",
                 "--generations", "2", "--max-iters", "1", "--pop-size", "6", "--out", str(tmp_path / "c")]) == 0
    assert main(["profile", "--tables", str(tmp_path / "c" / "metrics.csv"), "--metric", "purity",
                 "--out", str(tmp_path / "p.csv")]) == 0
    assert main(["profile", "--tables", str(tmp_path / "missing.csv"), "--metric", "purity",
                 "--out", str(tmp_path / "p.csv")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["run", "--solver", "bogus"])
    assert exc.value.code == 2


def test_cli_partial_failure(tmp_path, monkeypatch):
    import nsma.bench as bench

    real = bench.run

    def flaky(solver, *a, **k):
        rec = real(solver, *a, **k)
        if solver == "fpga":
            rec.failed = True
        return rec

    monkeypatch.setattr(bench, "run", flaky)
    code = main(["compare", "--solvers", "nsga2,fpga", "--problems", "ZDT1", "--n-list", "3", "--seeds", "1",
                 "--generations", "2", "--max-iters", "1", "--pop-size", "6", "--out", str(tmp_path)])
    assert code == 3
    table = MetricTable.read_csv(tmp_path / "metrics.csv")
    assert table.get("ZDT1_n3", "fpga").purity is None
