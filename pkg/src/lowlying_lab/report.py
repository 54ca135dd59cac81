"""Result rows and report files written by the command-line interface."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

CSV_COLUMNS = ("name", "value", "predicted", "stderr", "tolerance", "pass")


@dataclass(frozen=True)
class ResultRow:
    """One computed quantity and, when it carries one, its verdict.

    Attributes:
        name: Dotted identifier, e.g. ``rmt.d1.sp``.
        value: Computed or empirical value.
        predicted: Reference value, if any.
        stderr: Monte Carlo standard error, if any.
        tolerance: Allowed deviation, if any.
        passed: Verdict; None for rows that only record a value.
    """

    name: str
    value: float | None
    predicted: float | None = None
    stderr: float | None = None
    tolerance: float | None = None
    passed: bool | None = None

    @classmethod
    def compare(
        cls,
        name: str,
        value: float,
        predicted: float,
        tolerance: float,
        stderr: float | None = None,
    ) -> ResultRow:
        """Row that passes when |value - predicted| <= tolerance."""
        ok = bool(math.isfinite(value) and abs(value - predicted) <= tolerance)
        return cls(name, value, predicted, stderr, tolerance, ok)

    @classmethod
    def check(cls, name: str, ok: bool, value: float | None = None) -> ResultRow:
        """Row whose verdict is ``ok``."""
        return cls(name, value, passed=bool(ok))

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["pass"] = data.pop("passed")
        return {k: _clean(v) for k, v in data.items()}


def _clean(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if hasattr(value, "item"):
        return value.item()
    return value


@dataclass
class Report:
    """Everything one CLI run produced."""

    command: str
    config: dict[str, Any]
    results: list[ResultRow] = field(default_factory=list)
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(
            timespec="seconds"
        )
    )

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.results if row.passed is not None)

    @property
    def failures(self) -> list[ResultRow]:
        return [row for row in self.results if row.passed is False]

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "config": {k: _clean(v) for k, v in sorted(self.config.items())},
            "results": [row.to_dict() for row in self.results],
            "timestamp": self.timestamp,
        }

    def to_json(self) -> str:
        """Report as indented JSON."""
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        """One CSV line per result row, under a header."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.results:
            data = row.to_dict()
            writer.writerow([_csv_cell(data[col]) for col in CSV_COLUMNS])
        return buffer.getvalue()

    def render(self, fmt: str) -> str:
        """Report in ``fmt`` (json or csv)."""
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"format must be json or csv, got {fmt!r}")

    def write(self, path: Path, fmt: str) -> Path:
        """Write the rendered report, creating parent directories."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render(fmt))
        return path


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def read_csv_rows(text: str) -> list[dict[str, Any]]:
    """Parse a CSV report back into typed rows."""
    rows = []
    for raw in csv.DictReader(io.StringIO(text)):
        row: dict[str, Any] = {"name": raw["name"]}
        for col in ("value", "predicted", "stderr", "tolerance"):
            row[col] = float(raw[col]) if raw[col] else None
        row["pass"] = {"true": True, "false": False}.get(raw["pass"])
        rows.append(row)
    return rows
