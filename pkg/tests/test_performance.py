"""Tests for the check timing monitor."""

import pytest

from lowlying_lab.performance import CheckTiming, PerformanceMonitor


def test_timers():
    """Test named timers and unknown timers."""
    monitor = PerformanceMonitor()
    monitor.start_timer("a")
    assert monitor.end_timer("a") >= 0.0
    assert monitor.end_timer("never") == 0.0
    assert monitor.total_checks == 1


def test_track_records_on_error():
    """Test the context manager records even when the body raises."""
    monitor = PerformanceMonitor()
    try:
        with monitor.track("boom"):
            raise RuntimeError
    except RuntimeError:
        pass
    assert [t.name for t in monitor.history] == ["boom"]


def test_breakdown_and_summary():
    """Test averages per name, slowest entries and the summary text."""
    monitor = PerformanceMonitor(history_size=10)
    monitor.history.extend(
        [CheckTiming("x", 0.002), CheckTiming("x", 0.004), CheckTiming("y", 0.010)]
    )
    monitor.total_checks = 3
    breakdown = monitor.get_timing_breakdown()
    assert breakdown["x"] == pytest.approx(3.0)
    assert breakdown["y"] == pytest.approx(10.0)
    assert [t.name for t in monitor.get_slowest(2)] == ["y", "x"]
    summary = monitor.get_summary().splitlines()
    assert summary[0].startswith("3 checks in")
    assert summary[1] == "  y: 10.0 ms"


def test_history_is_bounded_and_reset():
    """Test the history size limit and reset."""
    monitor = PerformanceMonitor(history_size=2)
    for name in "abc":
        with monitor.track(name):
            pass
    assert [t.name for t in monitor.history] == ["b", "c"]
    monitor.reset()
    assert not monitor.history
    assert monitor.total_checks == 0
