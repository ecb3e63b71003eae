import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from oef import cli, experiments
from oef.errors import NumericError

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.mark.parametrize("command", ["error-curve", "sweep", "bias-study", "simulate"])
def test_default_output_matches_golden(command, capsys):
    code, out, _ = run([command], capsys)
    assert code == 0
    assert out == (GOLDEN / f"{command}.csv").read_text()


@pytest.mark.parametrize("argv,name", [(["solve"], "solve.json"), (["solve", "--format", "csv"], "solve.csv")])
def test_solve_matches_golden(argv, name, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0 and out == (GOLDEN / name).read_text()


def test_solve_json_round_trips(capsys):
    _, out, _ = run(["solve", "--method", "milp"], capsys)
    doc = json.loads(out)
    assert json.loads(json.dumps(doc)) == doc
    assert doc["solution"]["method"] == "milp-enumeration"
    assert abs(sum(doc["solution"]["phi"]) - 1.0) < 1e-12


def test_milp_dominates_pure(capsys):
    _, a, _ = run(["solve", "--method", "milp"], capsys)
    _, b, _ = run(["solve", "--method", "pure"], capsys)
    assert json.loads(a)["solution"]["leader_value"] >= json.loads(b)["solution"]["leader_value"] - 1e-12


def test_single_strategy_grid_is_echoed(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"grids": {"instructor_rates": [3], "student_rates": [5]}}))
    _, out, _ = run(["solve", "--config", str(cfg)], capsys)
    sol = json.loads(out)["solution"]
    assert sol["phi"] == [1.0] and sol["student_rates"] == [5.0, 5.0]


def test_out_file_and_plot(tmp_path):
    out = tmp_path / "curve.csv"
    assert cli.main(["error-curve", "--out", str(out), "--plot"]) == 0
    assert out.read_text() == (GOLDEN / "error-curve.csv").read_text()
    png = out.with_suffix(".png")
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_mode_flag(capsys):
    _, out, _ = run(["sweep", "--mode", "steady"], capsys)
    assert {r["mode"] for r in rows(out)} == {"steady"}


def test_seed_flag_changes_simulation(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"simulate": {"replications": 200}}))
    _, a, _ = run(["simulate", "--config", str(cfg), "--seed", "1"], capsys)
    _, b, _ = run(["simulate", "--config", str(cfg), "--seed", "2"], capsys)
    assert a != b and {r["seed"] for r in rows(a)} == {"1"}


def test_idle_simulation_is_exact(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"simulate": {"lambdas": [0, 0], "replications": 20}}))
    _, out, _ = run(["simulate", "--config", str(cfg)], capsys)
    for r in rows(out):
        assert r["sigmas"] == "0" and r["std_error"] == "0"
    # one simulated student per type, each weighted by its per-student bias
    instr = rows(out)[-1]
    assert float(instr["estimate"]) == pytest.approx(-0.5 * 11.0 * (0.99 / 500 + 0.01 / 500))


def test_error_curve_undefined_rows_print_na(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"error_curve": {"lambda": 0, "T_values": [1, 2]}}))
    _, out, _ = run(["error-curve", "--config", str(cfg)], capsys)
    assert [r["normalized_error"] for r in rows(out)] == ["NA", "NA"]


def test_error_curve_shape(capsys):
    _, out, _ = run(["error-curve"], capsys)
    data = rows(out)
    assert [float(r["T"]) for r in data] == list(range(1, 26))
    err = {int(float(r["T"])): float(r["normalized_error"]) for r in data}
    assert err[20] < err[2]


def test_bias_study_layout(capsys):
    _, out, _ = run(["bias-study"], capsys)
    data = rows(out)
    assert len(data) == 162
    assert sorted({int(r["config_id"]) for r in data}) == list(range(1, 82))
    first = data[0]
    assert (first["alpha1"], first["alpha2"], first["m1"], first["m2"]) == ("0.01", "0.8", "2", "2")
    assert data[-1]["alpha1"] == "0.2" and data[-1]["m2"] == "10"
    assert {r["method"] for r in data} == {"pure"}


@pytest.mark.parametrize("doc", ['{"chain": {"M": -1}}', "{broken"])
def test_config_error_exit_code(tmp_path, capsys, doc):
    cfg = tmp_path / "c.json"
    cfg.write_text(doc)
    code, out, err = run(["sweep", "--config", str(cfg)], capsys)
    assert code == cli.EXIT_CONFIG and out == ""
    assert "config error" in err


def test_schema_path_reported(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"chain": {"M": -1}}')
    _, _, err = run(["sweep", "--config", str(cfg)], capsys)
    assert "$.chain.M" in err


def test_numeric_failure_exit_code(monkeypatch, capsys):
    def boom(cfg):
        raise NumericError("singular")

    monkeypatch.setattr(experiments, "sweep", boom)
    code, _, err = run(["sweep"], capsys)
    assert code == cli.EXIT_NUMERIC and "singular" in err


def test_plot_requires_out(capsys):
    code, _, _ = run(["sweep", "--plot"], capsys)
    assert code == cli.EXIT_CONFIG


def test_console_entry_point(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"chain": {"M": 0}}')
    proc = subprocess.run([sys.executable, "-m", "oef.cli", "solve", "--config", str(cfg)], capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "oef.cli", "error-curve"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == (GOLDEN / "error-curve.csv").read_text()
