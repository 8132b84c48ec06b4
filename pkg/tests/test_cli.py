import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import commuting_model
from hcrb.cli import main, parse_values
from hcrb.errors import ConfigError
from hcrb.report import COLUMNS, SCHEMA, parse_csv


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_values():
    assert parse_values("2:5", int) == [2, 3, 4, 5]
    assert parse_values("0.1,0.3", float) == [0.1, 0.3]
    assert parse_values("4", int) == [4]
    for bad in ("5:2", "a,b", "1.5"):
        with pytest.raises(ConfigError):
            parse_values(bad, int)


def test_compute_csv_layout(capsys):
    code, out, _ = run(["compute", "--scenario", "ghz3d", "--n", "2", "--g", "0.3"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == f"# {SCHEMA}"
    assert lines[1].split(",") == list(COLUMNS)
    rows = parse_csv(out)
    assert [r["method"] for r in rows] == ["qcrb", "simple2", "tight2", "multi-lower"]
    tight = rows[2]
    assert tight["certified"] is True
    assert rows[0]["lower"] <= tight["lower"] <= tight["upper"] <= rows[0]["upper"] + 1e-9


def test_csv_and_json_agree(capsys):
    argv = ["compute", "--scenario", "binomial", "--G", "3", "--n", "5", "--x", "-0.8",
            "--phi", "0.7", "--lambda", "0.2", "--beta", "0.1"]
    _, csv_out, _ = run(argv, capsys)
    _, json_out, _ = run(argv + ["--format", "json"], capsys)
    doc = json.loads(json_out)
    assert doc["schema"] == SCHEMA and doc["columns"] == list(COLUMNS)
    assert parse_csv(csv_out) == doc["rows"]
    assert doc["rows"][0]["descriptor"] == "binomial[G=3 n=5 x=-0.8 phi=0.7 lambda_th=0.2 beta=0.1]"


def test_output_is_byte_identical_across_runs(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"o{i}.csv"
        assert main(["sweep", "--scenario", "ghz", "--n", "3", "--g", "0.1,0.2", "-o", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_sweep_grid_order_and_trend(capsys):
    code, out, _ = run(["sweep", "--scenario", "ghz3d", "--n", "2:5", "--g", "0.1,0.3,0.5",
                        "--method", "tight2"], capsys)
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 12
    # n is the outer axis, g the inner one
    assert rows[1]["descriptor"] == "ghz3d[n=2 g=0.3 theta=0.0/0.0/0.0]"
    assert rows[3]["descriptor"].startswith("ghz3d[n=3 g=0.1")
    for k in range(4):
        ups = [r["upper"] for r in rows[3 * k: 3 * k + 3]]
        assert ups[0] < ups[1] < ups[2]


def test_workers_preserve_order(tmp_path):
    base = ["sweep", "--scenario", "ghz", "--n", "3:4", "--g", "0.1,0.4", "--method", "qcrb"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(base + ["-o", str(a)]) == 0
    assert main(base + ["--workers", "3", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_custom_classical_model_all_methods(tmp_path, capsys):
    m = commuting_model(np.random.default_rng(9), 3)
    path = tmp_path / "m.json"
    path.write_text(json.dumps(m.to_dict()))
    code, out, _ = run(["compute", "--model", str(path)], capsys)
    assert code == 0
    rows = {r["method"]: r for r in parse_csv(out)}
    c_s = rows["qcrb"]["c_s"]
    assert rows["qcrb"]["weak_comm_norm"] < 1e-12
    for name in ("simple2", "tight2"):
        assert rows[name]["lower"] == pytest.approx(c_s, rel=1e-9)
        assert rows[name]["upper"] == pytest.approx(c_s, rel=1e-9)
        assert rows[name]["certified"] is True
    assert rows["multi-lower"]["upper"] is None and rows["multi-lower"]["certified"] is False


def test_three_parameter_model_skips_two_parameter_methods(capsys):
    code, out, _ = run(["compute", "--scenario", "ghz3d", "--n", "2", "--g", "0.3", "--all-three"], capsys)
    assert code == 0
    assert [r["method"] for r in parse_csv(out)] == ["qcrb", "multi-lower"]


def test_export_model_round_trip(tmp_path, capsys):
    path = tmp_path / "model.json"
    assert main(["export-model", "--scenario", "gnu", "--n", "2", "--g", "0.2", "-o", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert doc["dim"] == 4 and doc["nparams"] == 2
    code, out, _ = run(["compute", "--model", str(path), "--method", "qcrb"], capsys)
    assert code == 4  # GNU at two qubits has dependent derivatives
    code, out, _ = run(["compute", "--scenario", "gnu", "--n", "2", "--g", "0.2", "--method", "qcrb"], capsys)
    assert code == 4


def test_spec_file_with_overrides(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"scenario": "ghz3d", "n": 3, "g": 0.5}))
    _, out, _ = run(["compute", "--spec", str(spec), "--g", "0.1", "--method", "qcrb"], capsys)
    assert parse_csv(out)[0]["descriptor"] == "ghz3d[n=3 g=0.1 theta=0.0/0.0/0.0]"


def test_timing_column_is_opt_in(capsys):
    _, out, _ = run(["compute", "--scenario", "ghz", "--n", "3", "--g", "0.2", "--method", "qcrb", "--timing"], capsys)
    row = parse_csv(out)[0]
    assert row["wall_time_s"] >= 0
    _, out, _ = run(["compute", "--scenario", "ghz", "--n", "3", "--g", "0.2", "--method", "qcrb"], capsys)
    assert "wall_time_s" not in parse_csv(out)[0]


def test_exit_codes(tmp_path, capsys):
    # configuration errors
    assert run(["compute", "--scenario", "gnu", "--n", "3", "--g", "0.2"], capsys)[0] == 2
    assert run(["compute", "--scenario", "ghz", "--n", "2:3", "--g", "0.2"], capsys)[0] == 2
    assert run(["compute", "--n", "2"], capsys)[0] == 2
    assert run(["sweep", "--scenario", "ghz", "--n", "3", "--g", "0.2", "--workers", "0"], capsys)[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["compute", "--scenario", "laser"])
    assert info.value.code == 2
    # model failures
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rho": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]], "drho": [[[[0, 0], [0, 0]], [[0, 0], [0, 0]]]]}))
    assert run(["compute", "--model", str(bad)], capsys)[0] == 3
    code, out, err = run(["compute", "--scenario", "binomial", "--G", "1", "--n", "2", "--x", "1",
                          "--lambda", "0.1", "--beta", "1"], capsys)
    assert code == 3 and "DomainError" in err
    # violated hypotheses name the hypothesis
    code, out, err = run(["compute", "--scenario", "ghz", "--n", "3", "--g", "0"], capsys)
    assert code == 4 and "hypothesis: full rank" in err
    assert parse_csv(out)[0]["error"].startswith("HypothesisError")


def test_sweep_records_failing_points(capsys):
    code, out, err = run(["sweep", "--scenario", "binomial", "--G", "1", "--n", "2", "--x", "0.5,1,0.7",
                          "--lambda", "0.1", "--beta", "1", "--method", "tight2"], capsys)
    assert code == 3
    rows = parse_csv(out)
    assert [r["error"] is None for r in rows] == [True, False, True]
    assert err.count("hcrb:") == 1


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hcrb.cli", "compute", "--scenario", "ghz", "--n", "3",
                           "--g", "0.2", "--method", "qcrb"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith(f"# {SCHEMA}\n")
