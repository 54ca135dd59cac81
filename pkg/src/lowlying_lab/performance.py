"""Timing of verification checks and experiments."""

from __future__ import annotations

import time
from collections import deque
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass


@dataclass
class CheckTiming:
    """Wall time of one named check."""

    name: str
    elapsed: float


class PerformanceMonitor:
    """Record named timers; summaries are logged, never written to reports."""

    def __init__(self, history_size: int = 1000) -> None:
        """Initialize performance monitor.

        Args:
            history_size: Number of timings kept for averaging.
        """
        self.history: deque[CheckTiming] = deque(maxlen=history_size)
        self.timers: dict[str, float] = {}
        self.total_checks = 0
        self.start_time = time.perf_counter()

    def start_timer(self, name: str) -> None:
        """Start a named timer."""
        self.timers[name] = time.perf_counter()

    def end_timer(self, name: str) -> float:
        """End a named timer and record the elapsed time.

        Returns:
            Elapsed seconds, or 0.0 if the timer was never started.
        """
        started = self.timers.pop(name, None)
        if started is None:
            return 0.0
        elapsed = time.perf_counter() - started
        self.history.append(CheckTiming(name, elapsed))
        self.total_checks += 1
        return elapsed

    @contextmanager
    def track(self, name: str) -> Iterator[None]:
        """Time the enclosed block under ``name``."""
        self.start_timer(name)
        try:
            yield
        finally:
            self.end_timer(name)

    def get_timing_breakdown(self) -> dict[str, float]:
        """Average time per check name, in milliseconds."""
        sums: dict[str, float] = {}
        counts: dict[str, int] = {}
        for entry in self.history:
            sums[entry.name] = sums.get(entry.name, 0.0) + entry.elapsed
            counts[entry.name] = counts.get(entry.name, 0) + 1
        return {name: sums[name] / counts[name] * 1000 for name in sums}

    def get_slowest(self, count: int = 5) -> list[CheckTiming]:
        return sorted(self.history, key=lambda t: t.elapsed, reverse=True)[:count]

    def get_summary(self) -> str:
        """One line per check name, slowest first."""
        runtime = time.perf_counter() - self.start_time
        lines = [f"{self.total_checks} checks in {runtime:.2f} s"]
        breakdown = sorted(
            self.get_timing_breakdown().items(), key=lambda kv: kv[1], reverse=True
        )
        for name, ms in breakdown:
            lines.append(f"  {name}: {ms:.1f} ms")
        return "\n".join(lines)

    def reset(self) -> None:
        self.history.clear()
        self.timers.clear()
        self.total_checks = 0
        self.start_time = time.perf_counter()
