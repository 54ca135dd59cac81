"""Tests for the command-line interface."""

import json
import tempfile
from pathlib import Path

import pytest

from lowlying_lab import cli
from lowlying_lab.report import ResultRow, read_csv_rows


def _results(output: str) -> dict:
    data = json.loads(output)
    return {row["name"]: row for row in data["results"]}


def test_help(runner):
    """Test the group and a command print help."""
    result = runner.invoke(cli.main, ["--help"])
    assert result.exit_code == 0
    assert "prime-sums" in result.stdout
    result = runner.invoke(cli.main, ["rmt-sim", "--help"])
    assert result.exit_code == 0
    assert "--samples" in result.stdout


def test_predict_json(runner):
    """Test one prediction table written as JSON to stdout."""
    result = runner.invoke(cli.main, ["predict", "--theorem", "B"])
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["command"] == "predict"
    assert data["config"]["theorem"] == "B"
    rows = _results(result.stdout)
    assert rows["predict.B.r2"]["value"] == pytest.approx(0.75)
    assert rows["predict.B.r2"]["pass"] is None
    assert "two readings" not in result.stderr


def test_predict_moment_note(runner):
    """Test the moment table prints both readings' note."""
    result = runner.invoke(cli.main, ["predict", "--theorem", "F", "--m", "6"])
    assert result.exit_code == 0
    assert "two readings of the even moments" in result.stderr
    assert "predict.F.m6.pairing" in _results(result.stdout)


def test_kloosterman_csv(runner):
    """Test the CSV report of S(6, 1; 9)."""
    result = runner.invoke(
        cli.main, ["--format", "csv", "kloosterman", "--m", "6", "--n", "1", "--c", "9"]
    )
    assert result.exit_code == 0
    rows = read_csv_rows(result.stdout)
    assert rows[0]["name"] == "kloosterman.6.1.9"
    assert abs(rows[0]["value"]) < 1e-9
    assert all(row["pass"] is not False for row in rows)
    assert "0 failed" in result.stderr


def test_output_file(runner):
    """Test --output writes the report and leaves stdout empty."""
    with tempfile.TemporaryDirectory() as tmpdir:
        path = Path(tmpdir) / "out" / "report.json"
        result = runner.invoke(cli.main, ["--output", str(path), "kloosterman"])
        assert result.exit_code == 0
        assert result.stdout == ""
        assert "Wrote json report" in result.stderr
        data = json.loads(path.read_text())
        assert data["config"]["output"] == str(path)
        assert "kloosterman.4.1.9" in {row["name"] for row in data["results"]}


def test_config_file_and_flags(runner):
    """Test file values apply unless a flag overrides them."""
    with tempfile.TemporaryDirectory() as tmpdir:
        path = Path(tmpdir) / "run.conf"
        path.write_text("# small grid\nkappa = 10\nn_max = 4\n")
        result = runner.invoke(
            cli.main, ["--config", str(path), "petersson", "--n-max", "3"]
        )
    assert result.exit_code == 0, result.stderr
    config = json.loads(result.stdout)["config"]
    assert config["kappa"] == 10
    assert config["n_max"] == 3
    assert "petersson.k10.n3.max_deviation" in _results(result.stdout)


def test_bad_config_key(runner):
    """Test an unknown key in the config file is a usage error."""
    with tempfile.TemporaryDirectory() as tmpdir:
        path = Path(tmpdir) / "run.conf"
        path.write_text("colour = blue\n")
        result = runner.invoke(cli.main, ["--config", str(path), "kloosterman"])
    assert result.exit_code == 2
    assert "unknown config key" in result.stderr


def test_missing_config_file(runner):
    """Test a config path that does not exist."""
    result = runner.invoke(cli.main, ["--config", "/nonexistent/run.conf", "predict"])
    assert result.exit_code == 2


def test_invalid_choice(runner):
    """Test click rejects an unknown group."""
    result = runner.invoke(cli.main, ["rmt-sim", "--group", "gue"])
    assert result.exit_code == 2


def test_build_error_exit_code(runner):
    """Test a composite level is reported on stderr with status 2."""
    result = runner.invoke(cli.main, ["delta", "--q", "4", "--n-max", "2"])
    assert result.exit_code == 2
    assert "q must be 1 or a prime" in result.stderr


def test_failed_check_exit_code(runner, monkeypatch):
    """Test a failing row gives status 1 and is named on stderr."""

    def failing(config):
        return [ResultRow.check("kloosterman.broken", False)]

    monkeypatch.setattr("lowlying_lab.experiments.kloosterman_rows", failing)
    result = runner.invoke(cli.main, ["kloosterman"])
    assert result.exit_code == 1
    assert "FAILED kloosterman.broken" in result.stderr
    assert _results(result.stdout)["kloosterman.broken"]["pass"] is False


def test_workers_from_environment(runner):
    """Test the worker count falls back to the environment."""
    env = {"LOWLYING_LAB_WORKERS": "3"}
    result = runner.invoke(cli.main, ["kloosterman"], env=env)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["config"]["workers"] == 3
    result = runner.invoke(cli.main, ["--workers", "2", "kloosterman"], env=env)
    assert json.loads(result.stdout)["config"]["workers"] == 2


def test_rerun_is_identical(runner):
    """Test two runs with one seed differ only in the timestamp."""
    args = ["--seed", "5", "rmt-sim", "--size", "4", "--samples", "200"]
    first = runner.invoke(cli.main, args)
    second = runner.invoke(cli.main, args)
    assert first.exit_code in (0, 1), first.stderr
    assert second.exit_code == first.exit_code
    first_report = json.loads(first.stdout)
    second_report = json.loads(second.stdout)
    first_report.pop("timestamp")
    second_report.pop("timestamp")
    assert first_report == second_report
    assert first_report["config"]["seed"] == 5
    assert first_report["config"]["samples"] == 200
    assert list(_results(first.stdout)) == ["rmt.sp.d1"]


def test_seed_after_command(runner):
    """Test --seed and --workers are accepted after the command name."""
    result = runner.invoke(cli.main, ["verify", "--suite", "partitions", "--seed", "7"])
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["config"]["seed"] == 7
    args = ["--workers", "3", "kloosterman", "--workers", "2"]
    result = runner.invoke(cli.main, args)
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["config"]["workers"] == 2


def test_prime_sums_weight_sixteen(runner):
    """Test the averaged prime sums at a weight with a non-Delta old space."""
    result = runner.invoke(
        cli.main, ["prime-sums", "--q", "11", "--kappa", "16", "--r", "1"]
    )
    assert result.exit_code == 0, result.stderr
    rows = _results(result.stdout)
    assert rows["primesums.q11.k16.r1.first.harmonic_average"]["value"] is not None
    assert "primesums.q11.k16.r1.signed+1" in rows


def test_prime_sums_out_of_reach(runner):
    """Test a support past the Delta-symbol range exits 2 with the usable nu."""
    result = runner.invoke(cli.main, ["prime-sums", "--q", "101", "--r", "3"])
    assert result.exit_code == 2
    assert "nu <=" in result.stderr
