import json
import subprocess
import sys

import numpy as np
import pytest

from plingam import csvio
from plingam.cli import main
from plingam.preprocess import preprocess
from plingam.simulate import SimSpec, sample_svar
from plingam.types import CausalOrder, WeightedDag
from plingam.var import TimeSeries, estimate_var


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def simulated(tmp_path_factory):
    out = tmp_path_factory.mktemp("sim")
    assert run("simulate", "--dims", 10, "--samples", 10000, "--seed", 1, "--out-dir", out) == 0
    return out


def test_simulate_outputs(simulated):
    lines = (simulated / "data.csv").read_text().splitlines()
    assert lines[0] == ",".join(f"x{j}" for j in range(10)) and len(lines) == 10001
    assert (simulated / "truth.csv").exists() and (simulated / "truth_order.txt").exists()
    manifest = json.loads((simulated / "manifest.jsonl").read_text())["manifest"]
    assert manifest["command"] == "simulate" and manifest["config"]["seed"] == 1


def test_simulate_repeatable(tmp_path, simulated):
    run("simulate", "--dims", 10, "--samples", 10000, "--seed", 1, "--out-dir", tmp_path)
    for name in ("data.csv", "truth.csv", "truth_order.txt", "manifest.jsonl"):
        assert (tmp_path / name).read_bytes() == (simulated / name).read_bytes()


def test_simulate_one_dim_is_usage_error(tmp_path):
    assert run("simulate", "--dims", 1, "--out-dir", tmp_path) == 1


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run("discover", "--bogus")
    assert exc.value.code == 1


def test_round_trip_and_parallel_bytes(tmp_path, simulated, capsys):
    seq, par = tmp_path / "seq", tmp_path / "par"
    assert run("discover", simulated / "data.csv", "--workers", 1, "--out-dir", seq) == 0
    assert run("discover", simulated / "data.csv", "--parallel", "--workers", 4, "--out-dir", par) == 0
    for name in ("adjacency.csv", "order.txt"):
        assert (seq / name).read_bytes() == (par / name).read_bytes()
    report = json.loads((seq / "report.jsonl").read_text())
    assert report["manifest"]["input_digest"].startswith("sha256:")
    capsys.readouterr()
    assert run("metrics", seq / "adjacency.csv", simulated / "truth.csv") == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["f1"] >= 0.9 and rec["recall"] >= 0.9 and rec["shd"] <= 2


def test_metrics_identical_and_empty(tmp_path, simulated, capsys):
    truth = simulated / "truth.csv"
    assert run("metrics", truth, truth, "--threshold", 0) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["f1"] == 1.0 and rec["shd"] == 0
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(f"x{j}" for j in range(10)) + "\n" + ("0.0," * 9 + "0.0\n") * 10)
    assert run("metrics", empty, truth) == 0
    assert json.loads(capsys.readouterr().out)["recall"] == 0.0


def test_metrics_dimension_mismatch(tmp_path, simulated):
    small = tmp_path / "s.csv"
    small.write_text("a,b\n0,1\n0,0\n")
    assert run("metrics", small, simulated / "truth.csv") == 2


def test_constant_column_names_it(tmp_path, capsys):
    p = tmp_path / "c.csv"
    rng = np.random.default_rng(0)
    p.write_text("a,flat,b\n" + "".join(f"{rng.uniform()},7,{rng.uniform()}\n" for _ in range(50)))
    assert run("discover", p, "--out-dir", tmp_path / "o") == 2
    assert "'flat'" in capsys.readouterr().err


def test_parse_error_exit(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n1,2\n3,x\n")
    assert run("discover", p, "--out-dir", tmp_path) == 2
    assert "line 3" in capsys.readouterr().err


def test_missing_file_exit(tmp_path):
    assert run("discover", tmp_path / "nope.csv", "--out-dir", tmp_path) == 2


def svar_csv(path, with_gaps=False):
    B0 = np.zeros((3, 3))
    B0[1, 0], B0[2, 1] = 0.7, -0.6
    B1 = np.diag([0.3, 0.2, 0.1])
    ts = sample_svar(WeightedDag(B0, CausalOrder((0, 1, 2))), [B1], 3000, 50, SimSpec(2, 2, seed=3))
    v = ts.values.cumsum(axis=0)  # integrated, so differencing recovers the SVAR
    rows = ["t,a,b,c,late"]
    for t, row in enumerate(v):
        cells = [repr(float(x)) for x in row]
        if with_gaps and t == 10:
            cells[1] = ""
        late = "" if t == 0 else repr(float(t % 7))
        rows.append(",".join([str(t)] + cells + [late]))
    path.write_text("\n".join(rows) + "\n")
    return path


def test_var_discover(tmp_path):
    src = svar_csv(tmp_path / "ts.csv", with_gaps=True)
    out = tmp_path / "v"
    code = run("var-discover", src, "--lag", 1, "--interpolate", "--difference", "--top", 2, "--out-dir", out)
    assert code == 0
    rep = json.loads((out / "report.jsonl").read_text())
    assert rep["preprocessing"]["steps"] == ["interpolate", "drop_incomplete", "difference"]
    assert rep["preprocessing"]["dropped_columns"] == ["late"]
    assert rep["preprocessing"]["interpolated_cells"] == 1
    assert rep["variables"] == ["a", "b", "c"]
    for name in ("b0.csv", "b1.csv", "m1.csv", "order.txt", "degrees.csv", "influence.csv"):
        assert (out / name).exists()
    b0 = np.loadtxt(out / "b0.csv", delimiter=",", skiprows=1)
    assert abs(b0[1, 0] - 0.7) < 0.1 and abs(b0[2, 1] + 0.6) < 0.1
    assert (out / "influence.csv").read_text().splitlines()[0] == "kind,rank,var,name,lag,tag,score"


def test_var_discover_parallel_same_bytes(tmp_path):
    src = svar_csv(tmp_path / "ts.csv")
    run("var-discover", src, "--difference", "--out-dir", tmp_path / "a")
    run("var-discover", src, "--difference", "--parallel", "--workers", 3, "--out-dir", tmp_path / "b")
    for name in ("b0.csv", "b1.csv", "m1.csv", "order.txt", "degrees.csv", "influence.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_var_discover_empty(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("a\nNA\n1\nNA\n")
    assert run("var-discover", p, "--out-dir", tmp_path) == 2


def test_bench_record(tmp_path):
    out = tmp_path / "b.jsonl"
    code = run("bench", "--dims", 4, "--samples", 500, "--workers", 2, "--repeats", 1, "--warmup", 0, "--out", out)
    assert code == 0
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(recs) == 1
    r = recs[0]
    assert r["ordering_fraction"] == r["ordering_seconds"] / r["total_seconds"]
    assert r["amdahl_theoretical"] == pytest.approx(1 / (1 - r["ordering_fraction"]))
    assert r["manifest"]["command"] == "bench"


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "plingam", "simulate", "--dims", "3", "--samples", "20", "--out-dir", str(tmp_path)],
        capture_output=True,
    )
    assert proc.returncode == 0 and (tmp_path / "data.csv").exists()


def test_workers_env(monkeypatch, tmp_path, simulated):
    monkeypatch.setenv("PLINGAM_WORKERS", "3")
    run("discover", simulated / "data.csv", "--parallel", "--out-dir", tmp_path)
    rep = json.loads((tmp_path / "report.jsonl").read_text())
    assert rep["manifest"]["config"]["workers"] == 3



def test_wide_price_table_shape(tmp_path):
    # 487 hourly series, ten with late starts and one interior gap
    rng = np.random.default_rng(0)
    T, d = 1200, 487
    prices = 100 * np.exp(np.cumsum(rng.laplace(scale=0.01, size=(T, d)), axis=0))
    lines = ["t," + ",".join(f"S{j}" for j in range(d))]
    for t in range(T):
        late = {j for j in range(0, d, 50)} if t < 5 else set()
        cells = ["" if j in late or (j == 7 and t == 600) else repr(float(prices[t, j])) for j in range(d)]
        lines.append(",".join([str(3600 * t)] + cells))
    src = tmp_path / "prices.csv"
    src.write_text("\n".join(lines) + "\n")

    names, values, stamps = csvio.read_table(src, allow_missing=True, time_column=True)
    values, names, log = preprocess(values, names, stamps, interpolate=True, difference=True)
    assert len(log.dropped_columns) == 10 and len(names) == 477 and log.interpolated_cells == 1
    m, resid = estimate_var(TimeSeries(values, var_names=tuple(names)), 1)
    assert m[0].shape == (477, 477) and resid.n_samples == T - 2
