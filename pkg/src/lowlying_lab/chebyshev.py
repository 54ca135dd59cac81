"""Chebyshev polynomials of the second kind as the Hecke eigenvalue algebra.

X_r is normalised by X_r(2 cos t) = sin((r + 1) t) / sin t, so that the Hecke
eigenvalue of a primitive form at p^r is X_r(lambda(p)) whenever p does not
divide the level.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .arith import factorize
from .quadrature import panel_rule

# rho * r guard for exact tables
MAX_TABLE_DEGREE = 10_000
DELIGNE_SLACK = 1e-12


def chebyshev_eval(r: int, x):
    """Evaluate X_r at x (scalar or array) with the three-term recurrence."""
    if r < 0:
        raise ValueError(f"degree r must be >= 0, got {r}")
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), x.copy()
    if r == 0:
        out = prev
    else:
        for _ in range(r - 1):
            prev, cur = cur, x * cur - prev
        out = cur
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class HeckeSystem:
    """Hecke eigenvalues at primes, extended multiplicatively.

    Attributes:
        prime_values: Map p -> lambda(p) with |lambda(p)| <= 2.
        level: Excluded prime (the level), or None at level 1.
        level_value: lambda(level); prime powers of the level use
            lambda(q^a) = lambda(q)^a.
    """

    prime_values: Mapping[int, float]
    level: int | None = None
    level_value: float | None = None
    _frozen: Mapping[int, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        values = {int(p): float(a) for p, a in self.prime_values.items()}
        for p, a in values.items():
            if abs(a) > 2.0 + DELIGNE_SLACK:
                raise ValueError(f"|lambda({p})| = {abs(a)} exceeds 2")
        if self.level is not None and self.level in values:
            raise ValueError(f"level {self.level} must not carry a prime value")
        object.__setattr__(self, "_frozen", MappingProxyType(values))

    @property
    def values(self) -> Mapping[int, float]:
        return self._frozen

    @classmethod
    def random(
        cls,
        primes: Iterable[int],
        rng: np.random.Generator,
        level: int | None = None,
    ) -> HeckeSystem:
        """Eigenvalues 2 cos(theta_p) with theta_p uniform in [0, pi]."""
        primes = [int(p) for p in primes if p != level]
        angles = rng.uniform(0.0, np.pi, size=len(primes))
        return cls(dict(zip(primes, 2.0 * np.cos(angles))), level=level)

    @classmethod
    def from_tau(cls, primes: Iterable[int]) -> HeckeSystem:
        """Normalised eigenvalues tau(p) / p^(11/2) of the weight 12 cusp form."""
        from .deltasym import ramanujan_tau

        return cls({int(p): ramanujan_tau(int(p)) / p**5.5 for p in primes})


def hecke_extend(system: HeckeSystem, n: int) -> float:
    """lambda(n) from the prime values of ``system``.

    Raises:
        KeyError: If a prime factor of n has no value in the system.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    value = 1.0
    for p, e in factorize(n).factors:
        if p == system.level:
            if system.level_value is None:
                raise KeyError(f"no eigenvalue supplied for level prime {p}")
            value *= system.level_value**e
            continue
        try:
            a = system.values[p]
        except KeyError:
            raise KeyError(f"no eigenvalue for prime {p}") from None
        value *= chebyshev_eval(e, a)
    return value


@dataclass(frozen=True)
class LinearizationTable:
    """Integer coefficients of X_r^varpi in the basis X_0, ..., X_{r varpi}."""

    varpi: int
    r: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.r * self.varpi + 1:
            raise ValueError("coefficient list has the wrong length")
        if any(c < 0 for c in self.coeffs):
            raise ValueError("linearization coefficients must be nonnegative")
        at_two = sum(c * (j + 1) for j, c in enumerate(self.coeffs))
        if at_two != (self.r + 1) ** self.varpi:
            raise ValueError("coefficients fail the X_j(2) = j + 1 check")

    def __getitem__(self, j: int) -> int:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return 0


def _multiply_by_xr(poly: list[int], r: int) -> list[int]:
    out = [0] * (len(poly) + r)
    for a, coeff in enumerate(poly):
        if coeff:
            for k in range(min(a, r) + 1):
                out[a + r - 2 * k] += coeff
    return out


def linearization_table(varpi: int, r: int) -> LinearizationTable:
    """Exact expansion of X_r^varpi using X_a X_b = sum_k X_{a+b-2k}.

    Args:
        varpi: Power, >= 0.
        r: Degree, >= 0.

    Returns:
        The table whose entry j is x(varpi, r, j).
    """
    if varpi < 0 or r < 0:
        raise ValueError(f"varpi and r must be >= 0, got {varpi}, {r}")
    if varpi * r > MAX_TABLE_DEGREE:
        raise ValueError(
            f"table degree r*varpi = {r * varpi} exceeds {MAX_TABLE_DEGREE}"
        )
    poly = [1]
    for _ in range(varpi):
        poly = _multiply_by_xr(poly, r)
    return LinearizationTable(varpi, r, tuple(poly))


def linearization_quadrature(varpi: int, r: int, j: int) -> float:
    """(2/pi) int_0^pi X_r(2 cos t)^varpi sin(t) sin((j+1) t) dt.

    This is the inner product <X_r^varpi, X_j>; the sin^(varpi-1) denominator
    is cancelled through X_r(2 cos t) = sin((r+1) t) / sin t.
    """
    if varpi < 1:
        raise ValueError(f"varpi must be >= 1, got {varpi}")
    theta, weights = panel_rule(0.0, math.pi, 8, 64)
    xr = chebyshev_eval(r, 2.0 * np.cos(theta))
    integrand = xr**varpi * np.sin(theta) * np.sin((j + 1) * theta)
    return float(2.0 / math.pi * np.dot(weights, integrand))


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


@dataclass(frozen=True)
class GeneratingCheck:
    """Partial sum of sum_r X_r(x) t^r against 1/(1 - x t + t^2)."""

    partial: float
    closed: float
    bound: float

    @property
    def ok(self) -> bool:
        return abs(self.partial - self.closed) <= self.bound + 1e-13


def generating_function_check(x: float, t: float, R: int) -> GeneratingCheck:
    """Compare the truncated generating series with its closed form.

    The tail bound uses |X_r(x)| <= r + 1 on [-2, 2].
    """
    if abs(x) > 2.0 or abs(t) >= 1.0:
        raise ValueError(f"need |x| <= 2 and |t| < 1, got x={x}, t={t}")
    partial = sum(chebyshev_eval(r, x) * t**r for r in range(R + 1))
    closed = 1.0 / (1.0 - x * t + t * t)
    a = abs(t)
    bound = ((R + 2) * a ** (R + 1) - (R + 1) * a ** (R + 2)) / (1.0 - a) ** 2
    return GeneratingCheck(partial, closed, bound)
