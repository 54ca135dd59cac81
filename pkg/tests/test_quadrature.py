"""Tests for the composite Gauss-Legendre rules."""

import math

import numpy as np
import pytest

from lowlying_lab.quadrature import integrate, panel_rule


def test_integrate_polynomial_exact():
    """Test a degree 9 polynomial integrates exactly on one panel."""
    value = integrate(lambda x: x**9 + 3 * x**2, 0.0, 2.0, panels=1, order=8)
    assert value == pytest.approx(2**10 / 10 + 8, rel=1e-14)


def test_integrate_oscillatory():
    """Test sin over [0, pi] and cos over a long interval."""
    assert integrate(np.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-14)
    assert integrate(np.cos, 0.0, 50.0, panels=16) == pytest.approx(
        math.sin(50.0), abs=1e-12
    )


def test_integrate_empty_interval():
    """Test reversed or empty intervals integrate to zero."""
    assert integrate(np.exp, 1.0, 1.0) == 0.0
    assert integrate(np.exp, 2.0, 1.0) == 0.0


def test_panel_rule_shape_and_weights():
    """Test nodes stay inside [a, b] and weights sum to b - a."""
    nodes, weights = panel_rule(-1.0, 3.0, 5, 16)
    assert nodes.shape == weights.shape == (80,)
    assert np.all((nodes > -1.0) & (nodes < 3.0))
    assert weights.sum() == pytest.approx(4.0, rel=1e-14)
    assert not nodes.flags.writeable
    assert not weights.flags.writeable


def test_panel_rule_rejects_zero_panels():
    """Test at least one panel is required."""
    with pytest.raises(ValueError):
        panel_rule(0.0, 1.0, 0)
