"""Katz-Sarnak density kernels and the closed-form density predictions.

The delta mass at the origin is never represented numerically: every kernel is
returned as a smooth part plus the coefficient of delta_0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .partitions import count_pair_partitions
from .quadrature import panel_rule
from .testfn import Side, TestFunction, pair_integrals

THETA_DEFAULT = 7.0 / 64.0


class SymmetryClass(str, Enum):
    SO_EVEN = "soeven"
    O = "o"
    SO_ODD = "soodd"
    SP = "sp"

    @property
    def delta_coefficient(self) -> float:
        """Coefficient of delta_0 in W_1 (direct side)."""
        return {"soeven": 0.0, "o": 0.5, "soodd": 1.0, "sp": 0.0}[self.value]

    @property
    def _hat_levels(self) -> tuple[float, float]:
        """Smooth part of the transformed kernel inside and outside |u| < 1."""
        return {
            "soeven": (0.5, 0.0),
            "o": (0.5, 0.5),
            "soodd": (0.5, 1.0),
            "sp": (-0.5, 0.0),
        }[self.value]


def eta(x):
    """1 on |x| < 1, 1/2 at |x| = 1, 0 beyond."""
    arr = np.abs(np.asarray(x, dtype=float))
    values = np.where(arr < 1.0, 1.0, np.where(arr == 1.0, 0.5, 0.0))
    return float(values) if values.ndim == 0 else values


@dataclass(frozen=True)
class KernelValue:
    smooth: float | np.ndarray
    delta: float


def w1(cls: SymmetryClass | str, x, space: Side | str = Side.DIRECT) -> KernelValue:
    """One-level density kernel of a symmetry class.

    Args:
        cls: Symmetry class.
        x: Point(s) of evaluation.
        space: ``direct`` for W_1, ``fourier`` for its transform.

    Returns:
        Smooth part at ``x`` and the delta_0 coefficient (0, 1/2 or 1).
    """
    cls = SymmetryClass(cls)
    arr = np.asarray(x, dtype=float)
    if Side(space) is Side.DIRECT:
        wave = np.sinc(2.0 * arr)
        smooth = {
            SymmetryClass.SO_EVEN: 1.0 + wave,
            SymmetryClass.O: np.ones_like(arr),
            SymmetryClass.SO_ODD: 1.0 - wave,
            SymmetryClass.SP: 1.0 - wave,
        }[cls]
        delta = cls.delta_coefficient
    else:
        window = np.asarray(eta(arr))
        smooth = {
            SymmetryClass.SO_EVEN: 0.5 * window,
            SymmetryClass.O: np.full_like(arr, 0.5),
            SymmetryClass.SO_ODD: 1.0 - 0.5 * window,
            SymmetryClass.SP: -0.5 * window,
        }[cls]
        delta = 1.0
    if np.ndim(smooth) == 0:
        smooth = float(smooth)
    return KernelValue(smooth, delta)


@dataclass(frozen=True)
class PlancherelPair:
    direct: float
    fourier: float


def plancherel_integral(cls: SymmetryClass | str, tf: TestFunction) -> PlancherelPair:
    """int Phi W_1 computed on both sides of Plancherel's formula.

    The direct side integrates over [-X, X] with X = ``tf.direct_cutoff`` and
    adds the tail mass of Phi, the kernel tending to 1 at infinity.
    """
    cls = SymmetryClass(cls)
    cutoff = tf.direct_cutoff
    x, w = panel_rule(0.0, cutoff, int(math.ceil(2.0 * cutoff)), 32)
    kernel = w1(cls, x, Side.DIRECT)
    direct = (
        2.0 * float(np.dot(w, np.asarray(tf.phi(x)) * kernel.smooth))
        + tf.tail_mass(cutoff)
        + kernel.delta * tf.phi_at_zero
    )

    inner, outer = cls._hat_levels
    fourier = float(tf.phi_hat(0.0))
    u, wu = panel_rule(0.0, min(tf.nu, 1.0), 8, 64)
    fourier += inner * 2.0 * float(np.dot(wu, tf.phi_hat(u)))
    if tf.nu > 1.0:
        u, wu = panel_rule(1.0, tf.nu, 8, 64)
        fourier += outer * 2.0 * float(np.dot(wu, tf.phi_hat(u)))
    return PlancherelPair(direct, fourier)


def _parity_sign(r: int) -> int:
    return 1 if r % 2 else -1


def predicted_one_level(r: int, tf: TestFunction) -> float:
    """Phi_hat(0) + (-1)^(r+1) Phi(0) / 2."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return float(tf.phi_hat(0.0)) + _parity_sign(r) * tf.phi_at_zero / 2.0


def predicted_two_level(
    r: int, tf1: TestFunction, tf2: TestFunction, signed: int | None = None
) -> float:
    """Asymptotic expectation of the two-level density.

    Args:
        r: Symmetric power.
        tf1: First test function.
        tf2: Second test function.
        signed: None for the full family, or the sign +1/-1 of the
            functional equation (odd r only).
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    pi = pair_integrals(tf1, tf2)
    both = pi.phi1_0 * pi.phi2_0
    common = pi.sigma12 - 2.0 * pi.prodhat0
    if signed is None:
        s = _parity_sign(r)
        first = (pi.phihat1_0 + s * pi.phi1_0 / 2) * (pi.phihat2_0 + s * pi.phi2_0 / 2)
        odd = 0.5 if r % 2 else 0.0
        return first + common + ((-1) ** r + odd) * both
    if r % 2 == 0:
        raise ValueError(f"signed two-level density needs odd r, got r={r}")
    if signed not in (1, -1):
        raise ValueError(f"signed must be +1 or -1, got {signed}")
    first = (pi.phihat1_0 + pi.phi1_0 / 2) * (pi.phihat2_0 + pi.phi2_0 / 2)
    return first + common - both + (both if signed == -1 else 0.0)


def predicted_covariance(tf1: TestFunction, tf2: TestFunction) -> float:
    """2 int |u| Phi_hat1 Phi_hat2, the limiting covariance of D_1."""
    return pair_integrals(tf1, tf2).sigma12


def predicted_variance(tf: TestFunction) -> float:
    return predicted_covariance(tf, tf)


class MomentReading(str, Enum):
    """Two readings of the even-moment formula (sigma^m vs sigma^2 power)."""

    PAIRING = "pairing"
    LITERAL = "literal"


def predicted_moment(
    m: int, tf: TestFunction, reading: MomentReading | str = MomentReading.PAIRING
) -> float:
    """Centered m-th moment of the one-level density.

    ``pairing`` gives sigma^m (m-1)!!, the Gaussian value; ``literal`` gives
    sigma^2 (m-1)!!.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m % 2:
        return 0.0
    variance = predicted_variance(tf)
    if MomentReading(reading) is MomentReading.PAIRING:
        return variance ** (m // 2) * count_pair_partitions(m)
    return variance * count_pair_partitions(m)


@dataclass(frozen=True)
class SignData:
    """Inputs of the root number of sym^r f."""

    kappa: int
    r: int
    eps_f_q: int

    def __post_init__(self) -> None:
        _check_weight(self.kappa)
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.eps_f_q not in (1, -1):
            raise ValueError(f"eps_f_q must be +1 or -1, got {self.eps_f_q}")


def _check_weight(kappa: int) -> None:
    if kappa < 2 or kappa % 2:
        raise ValueError(f"kappa must be an even integer >= 2, got {kappa}")


def i_power(kappa: int) -> int:
    """i^kappa for even kappa, as (-1)^(kappa/2)."""
    _check_weight(kappa)
    return -1 if (kappa // 2) % 2 else 1


def root_number_factor(kappa: int, r: int) -> int:
    """epsilon(kappa, r) = i^(h^2 (kappa - 1) + h) with h = (r + 1) / 2, r odd."""
    _check_weight(kappa)
    if r < 1 or r % 2 == 0:
        raise ValueError(f"r must be odd and positive, got {r}")
    h = (r + 1) // 2
    exponent = (h * h * (kappa - 1) + h) % 4
    if exponent % 2:
        raise RuntimeError(f"non-real root number factor for kappa={kappa}, r={r}")
    return 1 if exponent == 0 else -1


def sign_functional_equation(sd: SignData) -> int:
    """Root number of sym^r f: +1 for even r, eps_f(q) epsilon(kappa, r) else."""
    if sd.r % 2 == 0:
        return 1
    return sd.eps_f_q * root_number_factor(sd.kappa, sd.r)


def same_symmetry_type(r: int, kappa: int) -> bool:
    """Whether sym^r f and f share their symmetry type, i.e. epsilon(kappa, r) = 1."""
    if r % 2 == 0:
        return False
    return root_number_factor(kappa, r) == 1


@dataclass(frozen=True)
class SupportBoundParams:
    r: int
    kappa: int
    theta: float = THETA_DEFAULT

    def __post_init__(self) -> None:
        _check_weight(self.kappa)
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if not 0.0 <= self.theta <= THETA_DEFAULT:
            raise ValueError(f"theta must lie in [0, 7/64], got {self.theta}")


@dataclass(frozen=True)
class SupportBounds:
    """Admissible support thresholds for Phi_hat.

    Attributes:
        nu1max: One-level density.
        nu1max_signed: One-level density restricted to a sign.
        nu2max_unsigned: Two-level density and variance.
        nu2max_signed_C: Signed two-level density, 1/(2r(r+2)).
        nu2max_signed_thm: Signed two-level density, 1/(2r(r+1)).
        nu_variance_signed: Signed variance, 1/(2r^2).
    """

    r: int
    nu1max: float
    nu1max_signed: float
    nu2max_unsigned: float
    nu2max_signed_C: float
    nu2max_signed_thm: float
    nu_variance_signed: float

    def moment_bound(self, m: int) -> float:
        """Support threshold 4/(m r (r+2)) for the m-th moment."""
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        return 4.0 / (m * self.r * (self.r + 2))


def support_bounds(p: SupportBoundParams) -> SupportBounds:
    """Support thresholds of every statistic for one (r, kappa, theta)."""
    r = p.r
    nu1 = (1.0 - 1.0 / (2.0 * (p.kappa - 2.0 * p.theta))) * 2.0 / r**2
    return SupportBounds(
        r=r,
        nu1max=nu1,
        nu1max_signed=min(nu1, 3.0 / (r * (r + 2))),
        nu2max_unsigned=1.0 / r**2,
        nu2max_signed_C=1.0 / (2 * r * (r + 2)),
        nu2max_signed_thm=1.0 / (2 * r * (r + 1)),
        nu_variance_signed=1.0 / (2 * r**2),
    )


def symmetry_type(r: int, signed: int | None = None) -> SymmetryClass:
    """Symmetry type of the family of r-th symmetric powers."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if signed is not None and r % 2 == 0:
        raise ValueError(f"a sign split needs odd r, got r={r}")
    if r % 2 == 0:
        return SymmetryClass.SP
    if signed is None:
        return SymmetryClass.O
    if signed not in (1, -1):
        raise ValueError(f"signed must be +1 or -1, got {signed}")
    return SymmetryClass.SO_EVEN if signed == 1 else SymmetryClass.SO_ODD


def two_level_reading(cls: SymmetryClass | str) -> tuple[int, int | None]:
    """(r, sign) whose two-level prediction matches the class."""
    return {
        SymmetryClass.SP: (2, None),
        SymmetryClass.O: (1, None),
        SymmetryClass.SO_EVEN: (1, 1),
        SymmetryClass.SO_ODD: (1, -1),
    }[SymmetryClass(cls)]


def zero_count_main(T: float, q: float, r: int) -> float:
    """(T/pi) log(q^r T^(r+1) / (2 pi e)^(r+1))."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    if q <= 1:
        raise ValueError(f"q must exceed 1, got {q}")
    return T / math.pi * (
        r * math.log(q)
        + (r + 1) * math.log(T)
        - (r + 1) * math.log(2 * math.pi * math.e)
    )


def mean_spacing(q: float, r: int) -> float:
    """2 pi / log(q^r)."""
    if q <= 1 or r < 1:
        raise ValueError(f"need q > 1 and r >= 1, got q={q}, r={r}")
    return 2.0 * math.pi / (r * math.log(q))


def cusp_form_dimension(kappa: int) -> int:
    """Dimension of weight kappa cusp forms of level 1."""
    _check_weight(kappa)
    if kappa == 2:
        return 0
    base = kappa // 12
    return base - 1 if kappa % 12 == 2 else base


@dataclass(frozen=True)
class MassExponents:
    """Power savings in the harmonic mass and the level eigenvalue average."""

    gamma: float
    delta: float
    beta: float


def harmonic_mass_exponents(kappa: int) -> MassExponents:
    if cusp_form_dimension(kappa) == 0:
        return MassExponents(kappa - 0.5, (kappa - 1) / 2, (kappa - 1) / 2)
    return MassExponents(1.0, 2.5, 1.0)
