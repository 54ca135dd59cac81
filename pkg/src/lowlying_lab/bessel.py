"""Bessel functions of the first kind and integer order.

Three evaluation paths:

* small arguments: the ascending series in float arithmetic;
* moderate arguments: the same series summed in fixed-point integers, since
  floats lose digits to cancellation once x exceeds ~8;
* large arguments: Gauss-Legendre on J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt.
"""

from __future__ import annotations

import math
from enum import Enum
from functools import lru_cache

import numpy as np

from .quadrature import panel_rule

FLOAT_SERIES_MAX = 8.0
SERIES_WINDOW = 20.0
MAX_ARGUMENT = 1e6
_FLOAT_TERMS = 40
# elements per phase block in the integral path
_MAX_ELEMENTS = 1 << 21


class BesselMethod(str, Enum):
    AUTO = "auto"
    SERIES = "series"
    INTEGRAL = "integral"


def _series_float(order: int, x: np.ndarray) -> np.ndarray:
    half = 0.5 * x
    square = half * half
    term = half**order / math.factorial(order)
    total = term.copy()
    for k in range(1, _FLOAT_TERMS):
        term = -term * square / (k * (k + order))
        total += term
    return total


@lru_cache(maxsize=200_000)
def _series_fixed_point(order: int, x: float) -> float:
    """Ascending series with every term held as an integer multiple of 2**-bits."""
    a, b = float(x).as_integer_ratio()
    bits = 96 + int(1.5 * x)
    num, den = a * a, 4 * b * b
    term = (a**order << bits) // ((2 * b) ** order * math.factorial(order))
    total = 0
    k = 0
    while term:
        total += -term if k % 2 else term
        k += 1
        term = term * num // (den * k * (k + order))
    return total / (1 << bits)


def _integral(order: int, x: np.ndarray) -> np.ndarray:
    if x.size == 0:
        return np.zeros(0)
    panels = 4 + math.ceil((float(np.max(x)) + order) / 8.0)
    t, w = panel_rule(0.0, math.pi, panels, 32)
    out = np.empty_like(x)
    rows = max(1, _MAX_ELEMENTS // t.size)
    for start in range(0, x.size, rows):
        chunk = x[start : start + rows]
        acc = np.zeros(chunk.size)
        for lo in range(0, t.size, _MAX_ELEMENTS):
            ts, ws = t[lo : lo + _MAX_ELEMENTS], w[lo : lo + _MAX_ELEMENTS]
            phase = order * ts[None, :] - chunk[:, None] * np.sin(ts)[None, :]
            acc += np.cos(phase) @ ws
        out[start : start + rows] = acc / math.pi
    return out


def _series(order: int, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    small = x <= FLOAT_SERIES_MAX
    out[small] = _series_float(order, x[small])
    for i in np.flatnonzero(~small):
        out[i] = _series_fixed_point(order, float(x[i]))
    return out


def bessel_j(order: int, x, method: BesselMethod | str = BesselMethod.AUTO):
    """J_order(x) for x >= 0, absolute accuracy about 1e-12.

    Args:
        order: Integer order >= 0.
        x: Nonnegative scalar or array, at most 1e6.
        method: ``auto`` picks the series for x <= order + 20 and the
            integral representation above; ``series`` and ``integral`` force
            one path.

    Returns:
        A float for scalar input, otherwise an array of the input's shape.
    """
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    arr = np.asarray(x, dtype=float)
    flat = arr.ravel()
    if np.any(flat < 0) or np.any(flat > MAX_ARGUMENT):
        raise ValueError(f"x must lie in [0, {MAX_ARGUMENT:g}]")
    method = BesselMethod(method)
    if method is BesselMethod.SERIES:
        out = _series(order, flat)
    elif method is BesselMethod.INTEGRAL:
        out = _integral(order, flat)
    else:
        out = np.empty_like(flat)
        near = flat <= order + SERIES_WINDOW
        out[near] = _series(order, flat[near])
        out[~near] = _integral(order, flat[~near])
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def small_argument_bound(order: int, x):
    """(x/2)^order / order!, an upper bound for |J_order(x)| at every x >= 0."""
    arr = np.asarray(x, dtype=float)
    values = (0.5 * arr) ** order / math.factorial(order)
    return float(values) if values.ndim == 0 else values


def envelope_ratio(order: int, xs) -> float:
    """max |J_order(x)| / ((1 + x)^(-1/2) (x / (1 + x))^order) over ``xs``.

    The shape of the uniform estimate for J; the constant is recorded, never
    asserted.
    """
    xs = np.asarray(xs, dtype=float)
    xs = xs[xs > 0]
    if xs.size == 0:
        raise ValueError("need at least one positive x")
    shape = (1.0 + xs) ** -0.5 * (xs / (1.0 + xs)) ** order
    return float(np.max(np.abs(bessel_j(order, xs)) / shape))
