import json
import subprocess
import sys
from pathlib import Path

import pytest

CLI = [sys.executable, "-m", "minktube.cli"]

SMALL_CONFIG = """\
sets:
  point:
    kind: points
    xs: [0.0]
    schedule: {eps_max: 1.0e-2, eps_min: 1.0e-6}
  segment:
    kind: intervals
    intervals: [[0.0, 1.0]]
    schedule: {eps_max: 1.0e-2, eps_min: 1.0e-6}
  string:
    kind: a_string
    a: 1.0
    n_terms: 20000
    schedule: {eps_max: 1.0e-2, eps_min: 1.0e-5}
tolerances: {quadrature: 1.0e-9, measurability: 0.02, invariance: 0.02}
seed: 12345
"""


@pytest.fixture()
def config_path(tmp_path):
    p = tmp_path / "config.yaml"
    p.write_text(SMALL_CONFIG)
    return str(p)


def run_cli(*args):
    return subprocess.run(CLI + list(args), capture_output=True, text=True)


def test_selftest_passes_and_prints_table():
    res = run_cli("selftest")
    assert res.returncode == 0
    assert "all pass" in res.stdout
    assert "lift_integral" in res.stdout


def test_dim_point_agrees_across_ambients(config_path, tmp_path):
    out = tmp_path / "out"
    res = run_cli("dim", "--set", "point", "--config", config_path, "--out", str(out))
    assert res.returncode == 0
    report = json.loads((out / "dim_point.json").read_text())
    assert report["result"]["agree"] is True
    assert abs(report["result"]["base"]["fitted_d"]) < 1e-9
    assert abs(report["result"]["lifted"]["fitted_d"]) < 1e-6
    assert (out / "dim_point_base_trace.csv").exists()
    assert (out / "dim_point_lifted_trace.csv").exists()
    assert (out / "dim_point.png").exists()


def test_content_measurable_exit_zero(config_path):
    res = run_cli("content", "--set", "segment", "--s", "1.0", "--config", config_path)
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["result"]["verdict"] == "measurable"
    assert report["config"]["seed"] == 12345


def test_content_degenerate_exit_two(config_path):
    res = run_cli("content", "--set", "segment", "--s", "0.5", "--config", config_path)
    assert res.returncode == 2
    report = json.loads(res.stdout)
    assert report["result"]["verdict"] == "degenerate_infinite"


def test_invariance_point_passes(config_path, tmp_path):
    out = tmp_path / "inv"
    res = run_cli(
        "invariance", "--set", "point", "--s", "0.0",
        "--config", config_path, "--out", str(out),
    )
    assert res.returncode == 0
    report = json.loads(res.stdout)
    emb = report["result"]["embedding"]
    assert emb["verdict"] == "pass"
    assert abs(emb["normalized_ratio"] - 1.0) < 1e-6
    assert (out / "invariance_point_s0_base_trace.csv").exists()
    assert (out / "invariance_point_s0.png").exists()


def test_sandwich_command(config_path):
    res = run_cli("sandwich", "--set", "string", "--s", "0.5", "--config", config_path)
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["result"]["sandwich"]["ok"] is True
    assert report["result"]["coarse_bounds"]["ok"] is True


def test_product_command(config_path):
    res = run_cli(
        "product", "--set", "point", "--set-b", "segment",
        "--s", "0.0", "--r", "1.0", "--config", config_path,
    )
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["result"]["route"] == "stack_unit_interval"
    assert report["result"]["ok"] is True


def test_extremality_command(config_path):
    res = run_cli(
        "extremality", "--sets", "point,segment", "--s", "0.0",
        "--config", config_path, "--tol", "0.02",
    )
    # segment has dimension 1, probed at s=0: its entry reports ratios of
    # divergent-window estimates; the command only fails if a ratio
    # crosses the ball-volume ratio, which the point cannot do
    report = json.loads(res.stdout)
    assert report["result"]["entries"][0]["measurable"] is True


def test_unknown_set_is_operational_error(config_path):
    res = run_cli("content", "--set", "nope", "--s", "0.5", "--config", config_path)
    assert res.returncode == 1
    assert "no set named" in res.stderr


def test_missing_config_file_is_operational_error():
    res = run_cli("selftest", "--config", "/nonexistent/conf.yaml")
    assert res.returncode == 1
    assert "error" in res.stderr


def test_malformed_config_is_operational_error(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("sets: {x: {kind: points}}\n")  # xs missing
    res = run_cli("content", "--set", "x", "--s", "0.0", "--config", str(p))
    assert res.returncode == 1


def test_csv_traces_are_lossless(config_path, tmp_path):
    out = tmp_path / "csv"
    run_cli(
        "content", "--set", "point", "--s", "0.0",
        "--config", config_path, "--out", str(out),
    )
    csv_path = out / "content_point_s0_trace.csv"
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "eps,value"
    for line in lines[1:]:
        e, v = line.split(",")
        assert float(v) == pytest.approx(2.0, rel=1e-15)
        assert repr(float(e))  # parses
    assert len(lines) > 10


def test_report_embeds_resolved_config(config_path):
    res = run_cli("content", "--set", "point", "--s", "0.0", "--config", config_path)
    report = json.loads(res.stdout)
    assert report["config"]["tolerances"]["quadrature"] == 1e-9
    assert report["config"]["sets"]["string"]["n_terms"] == 20000
    assert report["schedule"][0] > report["schedule"][-1]


def _tree_bytes(root: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


def test_selftest_byte_identical_across_runs(tmp_path):
    outs = []
    stdouts = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        res = run_cli("selftest", "--out", str(out))
        assert res.returncode == 0
        stdouts.append(res.stdout)
        outs.append(_tree_bytes(out))
    assert stdouts[0] == stdouts[1]
    assert outs[0] == outs[1]


def test_invariance_byte_identical_across_runs(config_path, tmp_path):
    outs = []
    stdouts = []
    for tag in ("a", "b"):
        out = tmp_path / f"inv_{tag}"
        res = run_cli(
            "invariance", "--set", "string", "--s", "0.5",
            "--config", config_path, "--out", str(out),
        )
        assert res.returncode == 0
        stdouts.append(res.stdout)
        outs.append(_tree_bytes(out))
    assert stdouts[0] == stdouts[1]
    assert outs[0] == outs[1]
