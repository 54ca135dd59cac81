"""Tests for result rows and report files."""

import json
import math
import tempfile
from pathlib import Path

import numpy as np
import pytest

from lowlying_lab.report import CSV_COLUMNS, Report, ResultRow, read_csv_rows


def test_result_row_compare():
    """Test verdicts from |value - predicted| <= tolerance."""
    ok = ResultRow.compare("a", 1.0, 1.05, 0.1, stderr=0.02)
    assert ok.passed is True
    assert ok.stderr == 0.02
    bad = ResultRow.compare("b", np.float64(1.0), 1.5, 0.1)
    assert bad.passed is False
    assert ResultRow.compare("c", math.nan, 1.0, 10.0).passed is False


def test_result_row_check_and_record():
    """Test plain checks and value-only rows."""
    assert ResultRow.check("c", np.bool_(True)).passed is True
    row = ResultRow("value.only", 3.5)
    assert row.passed is None
    assert row.to_dict() == {
        "name": "value.only",
        "value": 3.5,
        "predicted": None,
        "stderr": None,
        "tolerance": None,
        "pass": None,
    }


def test_to_dict_cleans_values():
    """Test numpy scalars become Python values and non-finite values null."""
    data = ResultRow("x", np.float64(math.inf), predicted=np.float64(2.0)).to_dict()
    assert data["value"] is None
    assert type(data["predicted"]) is float


def test_report_verdicts():
    """Test passed and failures ignore value-only rows."""
    report = Report("verify", {"seed": 0})
    report.results += [ResultRow("v", 1.0), ResultRow.check("ok", True)]
    assert report.passed
    report.results.append(ResultRow.check("bad", False))
    assert not report.passed
    assert [row.name for row in report.failures] == ["bad"]


def test_report_json():
    """Test the JSON layout with sorted config keys."""
    report = Report(
        "predict", {"seed": 1, "format": "json"}, [ResultRow("x", 0.1)], "T"
    )
    data = json.loads(report.to_json())
    assert data["command"] == "predict"
    assert list(data["config"]) == ["format", "seed"]
    assert data["results"][0]["value"] == 0.1
    assert data["timestamp"] == "T"
    assert report.render("json").endswith("\n")


def test_report_csv_round_trip():
    """Test CSV cells and parsing back into typed rows."""
    rows = [
        ResultRow.compare("a", 0.1 + 0.2, 0.3, 1e-12),
        ResultRow("b", 2.0),
        ResultRow.check("c", False),
    ]
    text = Report("verify", {}, rows).to_csv()
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[2] == "b,2.0,,,,"
    parsed = read_csv_rows(text)
    assert parsed[0]["value"] == 0.1 + 0.2
    assert parsed[0]["pass"] is True
    assert parsed[1]["pass"] is None
    assert parsed[2]["pass"] is False
    assert parsed[2]["value"] is None


def test_render_rejects_unknown_format():
    """Test only json and csv are rendered."""
    with pytest.raises(ValueError):
        Report("verify", {}).render("xml")


def test_write_creates_parent_directories():
    """Test writing into a missing directory."""
    report = Report("verify", {}, [ResultRow("x", 1.0)])
    with tempfile.TemporaryDirectory() as tmpdir:
        path = report.write(Path(tmpdir) / "out" / "report.csv", "csv")
        assert path.exists()
        assert path.read_text() == report.to_csv()
