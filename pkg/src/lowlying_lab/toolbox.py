"""Analytic toolbox: dyadic partitions, dyadic sums and two monitored bounds.

The monitors evaluate a left-hand side exactly (up to a certified truncation)
and compare it with the shape of a bound whose constant is not known; they
record ratios and never assert.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special

from .arith import divisor_count_table, kloosterman_row, primes_up_to
from .bessel import bessel_j
from .deltasym import DeltaParams, truncation_modulus
from .kernels import THETA_DEFAULT
from .testfn import TestFunction

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
MAX_COEFFICIENTS = 1000
PICARD_TAIL = 1e-8
PICARD_MAX_D = 200_000
MAX_PICARD_X = 1e4


class Direction(str, Enum):
    UP_TO = "up_to"
    FROM = "from"


def _smooth_step(u: np.ndarray) -> np.ndarray:
    """0 for u <= 0, 1 for u >= 1, built from exp(-1/t)."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore"):
        left = np.where(u > 0, np.exp(-1.0 / u), 0.0)
        right = np.where(u < 1, np.exp(-1.0 / (1.0 - u)), 0.0)
    return left / (left + right)


def psi(t):
    """Smooth ramp: 0 on t <= 1, 1 on t >= sqrt(2)."""
    values = _smooth_step((np.asarray(t, dtype=float) - 1.0) / (SQRT2 - 1.0))
    return float(values) if values.ndim == 0 else values


def rho(x):
    """psi(x) - psi(x / sqrt(2)), supported in [1, 2]."""
    arr = np.asarray(x, dtype=float)
    values = np.asarray(psi(arr)) - np.asarray(psi(arr / SQRT2))
    return float(values) if values.ndim == 0 else values


def smooth_partition(x: float) -> dict[int, float]:
    """Nonzero weights rho(x / sqrt(2)^a) keyed by the scale a.

    The weights telescope, so they sum to 1.
    """
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    centre = 2.0 * math.log2(x)
    lo, hi = math.floor(centre) - 3, math.ceil(centre) + 2
    scales = np.arange(lo, hi + 2)
    ramp = np.asarray(psi(x * 2.0 ** (-scales / 2.0)))
    weights = ramp[:-1] - ramp[1:]
    return {int(a): float(w) for a, w in zip(scales[:-1], weights) if w != 0.0}


def partition_check(grid: Sequence[float]) -> float:
    """Max deviation of sum_a rho(x / sqrt(2)^a) from 1 over ``grid``."""
    return max(abs(math.fsum(smooth_partition(x).values()) - 1.0) for x in grid)


def dyadic_envelope(alpha: float, bound: float, direction: Direction | str) -> float:
    sign = 1.0 if Direction(direction) is Direction.UP_TO else -1.0
    return bound ** (sign * alpha) / (1.0 - 2.0 ** (-alpha / 2.0))


def dyadic_sum(alpha: float, bound: float, direction: Direction | str) -> float:
    """Sum of M^alpha over powers M of sqrt(2) up to ``bound`` (or M^-alpha from it).

    Raises:
        RuntimeError: If the value exceeds the geometric envelope.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    direction = Direction(direction)
    if direction is Direction.UP_TO:
        if bound < 1:
            raise ValueError(f"bound must be >= 1, got {bound}")
        top = math.floor(2.0 * math.log2(bound) + 1e-12)
        value = math.fsum(SQRT2 ** (k * alpha) for k in range(top + 1))
    else:
        if not bound > 0:
            raise ValueError(f"bound must be positive, got {bound}")
        k = math.ceil(2.0 * math.log2(bound) - 1e-12)
        first = SQRT2 ** (-k * alpha)
        terms = [first]
        while terms[-1] > 1e-18 * first:
            k += 1
            terms.append(SQRT2 ** (-k * alpha))
        value = math.fsum(terms)
    envelope = dyadic_envelope(alpha, bound, direction)
    if value > envelope * (1.0 + 1e-12):
        raise RuntimeError(f"dyadic sum {value} exceeds its envelope {envelope}")
    return value


@dataclass(frozen=True)
class SieveRecord:
    lhs: float
    rhs_envelope: float
    ratio: float
    c_max: int


def _first_primes_avoiding(q: int, count: int) -> np.ndarray:
    limit = 16
    while True:
        primes = primes_up_to(limit)
        primes = primes[primes != q]
        if primes.size >= count:
            return primes[:count]
        limit *= 2


def sieve_form_monitor(
    q: int,
    k1: int,
    k2: int,
    a: Sequence[float],
    b: Sequence[float],
    tf: TestFunction,
    theta: float = THETA_DEFAULT,
    sign: int = 1,
    kappa: int = 12,
    tol: float = 1e-10,
) -> SieveRecord:
    """Kloosterman bilinear form over primes against its large-sieve envelope.

    lhs = sum_{q | c} sum_{p1, p2} a_p1 b_p2 S(p1^k1, sign p2^k2; c) / c
    J_{kappa-1}(4 pi sqrt(p1^k1 p2^k2) / c) Phi_hat(log p1 / log q)
    Phi_hat(log p2 / log q), where a and b are indexed by the primes != q in
    increasing order.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if len(a) > MAX_COEFFICIENTS or len(b) > MAX_COEFFICIENTS:
        raise ValueError(f"at most {MAX_COEFFICIENTS} coefficients per sequence")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p1 = _first_primes_avoiding(q, a.size)
    p2 = _first_primes_avoiding(q, b.size)
    ms = p1.astype(np.int64) ** k1
    ns = p2.astype(np.int64) ** k2
    log_q = math.log(q)
    wa = a * np.asarray(tf.phi_hat(np.log(p1) / log_q))
    wb = b * np.asarray(tf.phi_hat(np.log(p2) / log_q))

    big_m = float(ms.max()) if ms.size else 1.0
    big_n = float(ns.max()) if ns.size else 1.0
    envelope = (
        (q * q / (big_m * big_n)) ** theta
        * math.sqrt(1.0 + big_m / q)
        * math.sqrt(1.0 + big_n / q)
        * float(np.linalg.norm(a))
        * float(np.linalg.norm(b))
    )
    mass = float(np.abs(wa).sum() * np.abs(wb).sum())
    if mass == 0.0:
        return SieveRecord(0.0, envelope, 0.0, 0)

    budget = tol / (mass * math.sqrt(min(big_m, big_n)))
    c_max = truncation_modulus(
        DeltaParams(q, kappa, budget), int(big_m) * int(big_n), 1
    )
    root = np.sqrt(np.outer(ms, ns).astype(float))
    lhs = 0.0
    for c in range(q, c_max + 1, q):
        kernel = kloosterman_row(ms, sign * ns, c)
        kernel *= bessel_j(kappa - 1, 4.0 * math.pi * root / c)
        lhs += float(wa @ kernel @ wb) / c
    ratio = abs(lhs) / envelope if envelope > 0 else 0.0
    if ratio > 1.0:
        logger.warning("sieve form exceeds its envelope: ratio %.3g", ratio)
    return SieveRecord(lhs, envelope, ratio, c_max)


@dataclass(frozen=True)
class PicardRecord:
    """sum_d tau(d) / sqrt(d) |J_kappa(X/d)| against X^(1/2) log X or X^kappa."""

    X: float
    kappa: int
    lhs: float
    rhs_shape: float
    ratio: float
    cutoff: int
    tail_bound: float


def _picard_tail(X: float, kappa: int, d: int) -> float:
    """Tail over d' > d through tau(d') <= 2 sqrt(d') and |J| <= (y/2)^k / k!."""
    amp = 2.0 * (0.5 * X) ** kappa / math.factorial(kappa)
    return amp * float(special.zeta(kappa, d + 1))


def picard_monitor(X: float, kappa: int) -> PicardRecord:
    """Evaluate the divisor-weighted Bessel sum with a certified tail.

    The cutoff D is the smallest with tail below 1e-8, capped at 2e5; the tail
    bound actually reached is recorded.
    """
    if not 0 < X <= MAX_PICARD_X:
        raise ValueError(f"X must lie in (0, {MAX_PICARD_X:g}], got {X}")
    if kappa < 2:
        raise ValueError(f"kappa must be >= 2, got {kappa}")
    d = 1
    while d < PICARD_MAX_D and _picard_tail(X, kappa, d) >= PICARD_TAIL:
        d = min(2 * d, PICARD_MAX_D)
    tail = _picard_tail(X, kappa, d)
    logger.debug("picard X=%g kappa=%d: D=%d tail=%.3g", X, kappa, d, tail)
    ds = np.arange(1, d + 1)
    tau = divisor_count_table(d)[1:]
    lhs = float(np.sum(tau / np.sqrt(ds) * np.abs(bessel_j(kappa, X / ds))))
    shape = math.sqrt(X) * math.log(X) if X > 1 else X**kappa
    return PicardRecord(X, kappa, lhs, shape, lhs / shape, d, tail)


def picard_sweep(xs: Sequence[float], kappa: int) -> list[PicardRecord]:
    """Picard records for each X in ``xs``."""
    return [picard_monitor(float(x), kappa) for x in xs]
