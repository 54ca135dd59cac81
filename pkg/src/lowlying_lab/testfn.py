"""Even test functions Phi whose Fourier transforms are supported in [-nu, nu].

Conventions: Phi_hat(u) = int Phi(x) e(-xu) dx, so for even functions
Phi(x) = 2 int_0^nu Phi_hat(u) cos(2 pi x u) du.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate, special

from .quadrature import panel_rule

_CHUNK = 512


class Family(str, Enum):
    FEJER = "fejer"
    COSINE_SQUARED = "cosine_squared"


class Side(str, Enum):
    DIRECT = "direct"
    FOURIER = "fourier"


def _as_output(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


@dataclass(frozen=True)
class TestFunction:
    """A Fourier pair (Phi, Phi_hat) from one of the supported families.

    Attributes:
        family: Fejer (triangle transform, squared sinc) or CosineSquared.
        nu: Half-width of the support of Phi_hat.
    """

    __test__ = False

    family: Family
    nu: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        object.__setattr__(self, "nu", float(self.nu))

    def phi_hat(self, u):
        """Phi_hat(u); exactly zero for |u| > nu."""
        arr = np.abs(np.asarray(u, dtype=float))
        inside = arr <= self.nu
        if self.family is Family.FEJER:
            values = np.where(inside, 1.0 - arr / self.nu, 0.0)
        else:
            ramp = np.cos(0.5 * np.pi * arr / self.nu) ** 2
            values = np.where(inside, ramp, 0.0)
        return _as_output(values, arr.ndim == 0)

    def phi(self, x):
        """Phi(x), closed form for Fejer and numerical inversion otherwise."""
        arr = np.asarray(x, dtype=float)
        if self.family is Family.FEJER:
            values = self.nu * np.sinc(self.nu * arr) ** 2
        else:
            values = inverse_transform(self, arr)
        return _as_output(values, arr.ndim == 0)

    def evaluate(self, side: Side | str, t):
        if Side(side) is Side.DIRECT:
            return self.phi(t)
        return self.phi_hat(t)

    @property
    def phi_at_zero(self) -> float:
        """Phi(0) = int Phi_hat, which is nu for both families."""
        return self.nu

    @property
    def direct_cutoff(self) -> float:
        """Half-width of the truncated domain for direct-space integrals."""
        return 2000.0 if self.family is Family.FEJER else 200.0

    def tail_mass(self, cutoff: float) -> float:
        """int_{|x| > cutoff} Phi(x) dx.

        Exact for Fejer via the sine integral; for CosineSquared the leading
        term of the x^-3 asymptotic expansion.
        """
        a = 2.0 * math.pi * self.nu
        if self.family is Family.FEJER:
            si, _ = special.sici(a * cutoff)
            inner = (1.0 - math.cos(a * cutoff)) / cutoff + a * (0.5 * math.pi - si)
            return inner / (math.pi**2 * self.nu)
        scale = a * 8.0 * math.pi * self.nu**2 * cutoff**3
        return -2.0 * math.cos(a * cutoff) / scale


def inverse_transform(tf: TestFunction, x: np.ndarray) -> np.ndarray:
    """2 int_0^nu Phi_hat(u) cos(2 pi x u) du by composite Gauss-Legendre.

    The panel count grows with max |x| so every panel sees about one period.
    """
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    if flat.size == 0:
        return np.zeros_like(x)
    panels = 4 + math.ceil(tf.nu * float(np.max(np.abs(flat))))
    nodes, weights = panel_rule(0.0, tf.nu, panels, 32)
    weighted = weights * tf.phi_hat(nodes)
    out = np.empty_like(flat)
    for start in range(0, flat.size, _CHUNK):
        chunk = flat[start : start + _CHUNK]
        out[start : start + _CHUNK] = 2.0 * (
            np.cos(2.0 * np.pi * chunk[:, None] * nodes[None, :]) @ weighted
        )
    return out.reshape(x.shape)


@dataclass(frozen=True)
class PairIntegrals:
    """Integrals of a pair of test functions used by the predictions."""

    phihat1_0: float
    phihat2_0: float
    phi1_0: float
    phi2_0: float
    sigma12: float
    prodhat0: float


def pair_integrals(tf1: TestFunction, tf2: TestFunction) -> PairIntegrals:
    """sigma12 = 2 int |u| Phi_hat1 Phi_hat2 and prodhat0 = int Phi_hat1 Phi_hat2.

    Both are integrated over the common support [0, min(nu1, nu2)] and doubled
    by evenness.
    """
    top = min(tf1.nu, tf2.nu)
    u, w = panel_rule(0.0, top, 8, 64)
    prod = tf1.phi_hat(u) * tf2.phi_hat(u)
    return PairIntegrals(
        phihat1_0=float(tf1.phi_hat(0.0)),
        phihat2_0=float(tf2.phi_hat(0.0)),
        phi1_0=tf1.phi_at_zero,
        phi2_0=tf2.phi_at_zero,
        sigma12=float(4.0 * np.dot(w, u * prod)),
        prodhat0=float(2.0 * np.dot(w, prod)),
    )


def _qawo_inverse(tf: TestFunction, x: float) -> float:
    options = {"epsabs": 1e-13, "epsrel": 1e-13, "limit": 200}
    if x == 0.0:
        value, _ = integrate.quad(tf.phi_hat, 0.0, tf.nu, **options)
    else:
        value, _ = integrate.quad(
            tf.phi_hat, 0.0, tf.nu, weight="cos", wvar=2.0 * math.pi * x, **options
        )
    return 2.0 * value


def fourier_pair_check(tf: TestFunction, grid) -> float:
    """Max deviation between Phi and an independent inversion of Phi_hat.

    Fejer compares the closed form with Gauss-Legendre; CosineSquared compares
    the cached Gauss-Legendre inversion with adaptive QAWO quadrature.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(np.abs(grid) > 20.0):
        raise ValueError("grid must lie within [-20, 20]")
    values = np.asarray(tf.phi(grid), dtype=float)
    if tf.family is Family.FEJER:
        reference = inverse_transform(tf, grid)
    else:
        reference = np.array([_qawo_inverse(tf, x) for x in grid])
    return float(np.max(np.abs(values - reference)))


def direct_product_integral(
    tf1: TestFunction, tf2: TestFunction, cutoff: float = 400.0
) -> float:
    """int Phi1 Phi2 dx in direct space over [-cutoff, cutoff]."""
    panels = int(math.ceil(2.0 * cutoff))
    x, w = panel_rule(0.0, cutoff, panels, 32)
    return float(2.0 * np.dot(w, np.asarray(tf1.phi(x)) * np.asarray(tf2.phi(x))))
