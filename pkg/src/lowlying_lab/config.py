"""Run configuration: defaults, config files, environment and flags."""

from __future__ import annotations

import json
import logging
import os
from collections.abc import Mapping
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)

WORKERS_ENV = "LOWLYING_LAB_WORKERS"
FORMATS = ("json", "csv")
GROUPS = ("soeven", "o", "soodd", "sp")
FAMILIES = ("fejer", "cosine_squared")
THEOREMS = ("A", "B", "C", "D", "F", "signs", "bounds", "all")
STATS = ("d1", "d2", "variance", "moments")
SUITES = (
    "all",
    "arith",
    "chebyshev",
    "partitions",
    "testfn",
    "kernels",
    "rmt",
    "deltasym",
)
KINDS = ("sieve", "picard", "partition", "dyadic")
MODES = ("new", "old", "harmonic_average", "signed_twist")
MAX_SEED = 2**64 - 1


@dataclass
class RunConfig:
    """Parameters of one command run.

    ``seed`` and ``workers`` together fix every Monte Carlo draw.
    """

    command: str = "verify"
    seed: int = 0
    workers: int = 1
    output: str | None = None
    format: str = "json"

    # Ensemble and test function
    group: str = "sp"
    size: int = 100
    samples: int = 10_000
    family: str = "fejer"
    nu: float = 0.5

    # Forms and sums
    kappa: int = 12
    q: int = 101
    r: int = 2
    m: int = 4
    n: int = 1
    c: int = 9
    n_max: int = 20
    tol: float = 1e-8
    theta: float = 7.0 / 64.0
    x: float = 100.0

    # Command choices
    theorem: str = "all"
    stat: str = "d1"
    suite: str = "all"
    kind: str = "picard"
    mode: str = "harmonic_average"

    def to_dict(self) -> dict[str, Any]:
        """Convert config to dictionary."""
        return asdict(self)

    def update_from_dict(self, data: Mapping[str, Any]) -> None:
        """Update config values from dictionary."""
        for key, value in data.items():
            if hasattr(self, key):
                setattr(self, key, value)

    def validate(self) -> None:
        """Reject out-of-range values.

        Raises:
            ValueError: Naming the offending key.
        """
        checks = {
            "format": self.format in FORMATS,
            "group": self.group in GROUPS,
            "family": self.family in FAMILIES,
            "seed": 0 <= self.seed <= MAX_SEED,
            "workers": self.workers >= 1,
            "size": self.size >= 2,
            "samples": self.samples >= 1,
            "nu": self.nu > 0,
            "tol": self.tol > 0,
            "r": self.r >= 1,
            "m": self.m >= 1,
            "q": self.q >= 1,
            "kappa": self.kappa >= 2 and self.kappa % 2 == 0,
            "c": self.c >= 1,
            "n_max": self.n_max >= 1,
            "theta": 0 <= self.theta <= 7.0 / 64.0,
            "x": self.x > 0,
            "theorem": self.theorem in THEOREMS,
            "stat": self.stat in STATS,
            "suite": self.suite in SUITES,
            "kind": self.kind in KINDS,
            "mode": self.mode in MODES,
        }
        for key, ok in checks.items():
            if not ok:
                raise ValueError(f"invalid value for {key}: {getattr(self, key)!r}")


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def coerce(key: str, value: Any) -> Any:
    """Convert a raw config value to the type of field ``key``.

    Raises:
        KeyError: If ``key`` is not a config field.
        ValueError: If the value does not parse.
    """
    if key not in _FIELD_TYPES:
        raise KeyError(f"unknown config key {key!r}")
    kind = _FIELD_TYPES[key]
    if value is None or (kind == "str | None" and value in ("", "none", "None")):
        if "None" not in kind:
            raise ValueError(f"config key {key!r} must not be empty")
        return None
    try:
        if kind == "int":
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if kind == "float":
            return float(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"invalid value for {key}: {value!r}") from exc


def parse_config_text(text: str) -> dict[str, Any]:
    """Parse a JSON object or ``key = value`` lines with ``#`` comments."""
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        if not isinstance(data, dict):
            raise ValueError("config JSON must be an object")
        return data
    data = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        data[key] = value
    return data


class ConfigManager:
    """Resolve run configurations from defaults, files, environment and flags."""

    def read_file(self, path: Path) -> dict[str, Any]:
        """Typed values from a config file.

        Raises:
            OSError: If the file cannot be read.
            KeyError: On an unknown key.
            ValueError: On malformed content.
        """
        data = parse_config_text(Path(path).read_text())
        return {key: coerce(key, value) for key, value in data.items()}

    def resolve(
        self,
        command: str,
        path: Path | None = None,
        flags: Mapping[str, Any] | None = None,
        environ: Mapping[str, str] | None = None,
    ) -> RunConfig:
        """Merge defaults < file < environment < explicit flags.

        ``flags`` holds only the options the user actually passed; the
        worker count from ``LOWLYING_LAB_WORKERS`` applies when ``workers`` is
        not among them.
        """
        flags = dict(flags or {})
        environ = os.environ if environ is None else environ
        config = RunConfig(command=command)
        if path is not None:
            config.update_from_dict(self.read_file(path))
            logger.debug("loaded config file %s", path)
        if "workers" not in flags and environ.get(WORKERS_ENV):
            config.workers = coerce("workers", environ[WORKERS_ENV])
        for key, value in flags.items():
            setattr(config, key, coerce(key, value))
        config.command = command
        config.validate()
        return config
