"""Prime sums of the explicit formula and their harmonic averages.

For a primitive form of prime level q the one-level density equals
E[Phi; r] + P1 + sum_m (-1)^m P2[m] + O(1/log q^r). Averaging P1 and P2 with
harmonic weights turns Hecke eigenvalues into Delta-symbols: a new part at
level q and an old-form correction carried by level-one Delta-symbols.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .arith import divisor_count, is_prime, nu_mult, primes_up_to
from .chebyshev import HeckeSystem, hecke_extend
from .deltasym import (
    MAX_MN,
    DeltaParams,
    LevelOneHecke,
    delta_grid,
    level_one_hecke,
)
from .kernels import THETA_DEFAULT, cusp_form_dimension, root_number_factor
from .testfn import TestFunction

logger = logging.getLogger(__name__)

MAX_PRIME_RANGE = 1_000_000
MAX_COVARIANCE_RANGE = 10_000_000


class PrimeSumMode(str, Enum):
    NEW = "new"
    OLD = "old"
    HARMONIC_AVERAGE = "harmonic_average"
    SIGNED_TWIST = "signed_twist"


def _check_level(q: int, r: int) -> None:
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")


def _weighted_primes(
    q: int, exponent: float, limit: float, tf: TestFunction, power: float, scale: float
) -> tuple[np.ndarray, np.ndarray]:
    """Primes p != q with Phi_hat(scale log p / log q^r) != 0 and their weights.

    The weight is log(p) / p^power * Phi_hat(scale log p / (exponent log q)).
    """
    top = q ** (exponent * tf.nu / scale)
    if top > limit:
        raise ValueError(f"prime range {top:.6g} exceeds {limit:g}")
    primes = primes_up_to(int(math.floor(top)))
    primes = primes[primes != q]
    logp = np.log(primes.astype(float))
    weights = logp / primes**power * tf.phi_hat(scale * logp / (exponent * math.log(q)))
    keep = weights != 0
    return primes[keep], weights[keep]


def _deligne_tail(x: float, j: int) -> float:
    """sum_{i > j} (2i + 1) x^i."""
    return x ** (j + 1) * ((2 * j + 3) - (2 * j + 1) * x) / (1.0 - x) ** 2


def _check_reach(largest: int, extra: int, exponent: int, q: int) -> None:
    """Refuse Delta-symbol arguments m n past ``MAX_MN``, naming the usable nu."""
    if largest * extra > MAX_MN:
        nu_max = math.log(MAX_MN / extra) / (exponent * math.log(q))
        raise ValueError(
            f"Delta-symbol argument {largest * extra} exceeds {MAX_MN}; "
            f"at q={q} this sum needs nu <= {nu_max:.4g}"
        )


def _old_hecke(kappa: int, q: int, tol: float) -> LevelOneHecke | None:
    if cusp_form_dimension(kappa) == 0:
        return None
    return level_one_hecke(kappa, q, tol)


def _old_sum(
    hecke: LevelOneHecke | None,
    ms: Sequence[int],
    weights: np.ndarray,
    twisted: bool,
    tol: float,
) -> float:
    """sum_{ell | q^inf} ell^-1 sum_p Delta_1(m_p ell^2, n) w_p, n = q if twisted.

    With q coprime to m, Delta_1(m q^(2j), n) is the sum over level-one
    eigenforms of omega lambda(m) X_2j(lambda(q)) lambda(n); the j-sum stops
    once the Deligne bound of the remaining terms is below ``tol``.
    """
    if hecke is None or len(ms) == 0:
        return 0.0
    q = hecke.prime
    row_total = weights @ hecke.rows(ms)
    scale = hecke.omega * (2 if twisted else 1) * sum(
        abs(w) * divisor_count(m) for m, w in zip(ms, weights)
    )
    x = 1.0 / q
    total = 0.0
    vectors = hecke.chebyshev_vectors()
    j = 0
    while True:
        vec = next(vectors)
        if twisted:
            vec = hecke.hecke @ vec
        total += x**j * float(row_total @ vec)
        if scale * _deligne_tail(x, j) < tol:
            break
        next(vectors)
        j += 1
    logger.debug("old-form sum q=%d kappa=%d: ell up to q^%d", q, hecke.kappa, j)
    return total


def prime_sum_first(
    q: int,
    kappa: int,
    r: int,
    tf: TestFunction,
    mode: PrimeSumMode | str = PrimeSumMode.HARMONIC_AVERAGE,
    tol: float = 1e-8,
) -> float:
    """Harmonic average of P1[Phi; r] split into new and old parts.

    Args:
        q: Prime level.
        kappa: Even weight >= 4.
        r: Symmetric power.
        tf: Test function; primes run up to q^(r nu) <= 1e6.
        mode: ``new``, ``old``, their sum ``harmonic_average``, or
            ``signed_twist`` for sqrt(q) times the average of lambda(q) P1.
        tol: Truncation budget of every Delta-symbol and old-form sum.
    """
    _check_level(q, r)
    mode = PrimeSumMode(mode)
    primes, weights = _weighted_primes(q, r, MAX_PRIME_RANGE, tf, 0.5, 1.0)
    if primes.size == 0:
        return 0.0
    log_qr = r * math.log(q)
    powers = [int(p) ** r for p in primes]
    dp = DeltaParams(q, kappa, tol)
    twisted = mode is PrimeSumMode.SIGNED_TWIST
    _check_reach(max(powers), q if twisted else 1, r * r, q)
    hecke = None
    if mode is not PrimeSumMode.NEW:
        hecke = _old_hecke(kappa, q, tol)
        if hecke is not None:
            _check_reach(max(powers), max(hecke.basis), r * r, q)

    if twisted:
        new = delta_grid(dp, [m * q for m in powers], [1])[:, 0]
        new_part = -2.0 / log_qr * float(np.dot(new, weights))
        old = _old_sum(hecke, powers, weights, True, tol)
        old_part = 2.0 / (q * nu_mult(q) * log_qr) * old
        return math.sqrt(q) * (new_part + old_part)

    total = 0.0
    if mode in (PrimeSumMode.NEW, PrimeSumMode.HARMONIC_AVERAGE):
        new = delta_grid(dp, powers, [1])[:, 0]
        total += -2.0 / log_qr * float(np.dot(new, weights))
    if mode in (PrimeSumMode.OLD, PrimeSumMode.HARMONIC_AVERAGE):
        total += 2.0 / (q * log_qr) * _old_sum(hecke, powers, weights, False, tol)
    return total


def signed_expectation(
    q: int, kappa: int, r: int, tf: TestFunction, eps: int, tol: float = 1e-8
) -> float:
    """Average of P1 over the forms whose sym^r root number is ``eps``.

    E^eps(X) = E(X) - eps epsilon(kappa, r) sqrt(q) E(lambda(q) X).
    """
    if eps not in (1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps}")
    factor = root_number_factor(kappa, r)
    average = prime_sum_first(q, kappa, r, tf, PrimeSumMode.HARMONIC_AVERAGE, tol)
    twist = prime_sum_first(q, kappa, r, tf, PrimeSumMode.SIGNED_TWIST, tol)
    return average - eps * factor * twist


def prime_sum_first_form(
    q: int, r: int, tf: TestFunction, system: HeckeSystem
) -> float:
    """P1[Phi; r](f) for the form whose prime eigenvalues are ``system``."""
    _check_level(q, r)
    primes, weights = _weighted_primes(q, r, MAX_PRIME_RANGE, tf, 0.5, 1.0)
    values = [hecke_extend(system, int(p) ** r) for p in primes]
    return -2.0 / (r * math.log(q)) * float(np.dot(values, weights))


def prime_sum_second(
    q: int,
    kappa: int,
    r: int,
    m: int,
    tf: TestFunction,
    source: HeckeSystem | PrimeSumMode | str = PrimeSumMode.HARMONIC_AVERAGE,
    tol: float = 1e-8,
) -> float:
    """P2[Phi; r, m], a sum over primes of lambda(p^(2(r-m))) log(p) / p.

    Args:
        q: Prime level.
        kappa: Even weight.
        r: Symmetric power.
        m: Index in 0..r-1.
        tf: Test function; primes run up to q^(r nu / 2).
        source: A ``HeckeSystem`` for a single form, or ``new``, ``old`` or
            ``harmonic_average`` for the Delta-symbol average.
        tol: Truncation budget.
    """
    _check_level(q, r)
    if not 0 <= m < r:
        raise ValueError(f"m must lie in [0, {r - 1}], got {m}")
    primes, weights = _weighted_primes(q, r, MAX_PRIME_RANGE, tf, 1.0, 2.0)
    if primes.size == 0:
        return 0.0
    log_qr = r * math.log(q)
    powers = [int(p) ** (2 * (r - m)) for p in primes]
    if isinstance(source, HeckeSystem):
        values = [hecke_extend(source, k) for k in powers]
        return -2.0 / log_qr * float(np.dot(values, weights))
    mode = PrimeSumMode(source)
    if mode is PrimeSumMode.SIGNED_TWIST:
        raise ValueError("the second prime sum has no signed_twist mode")
    _check_reach(max(powers), 1, r * (r - m), q)
    hecke = None
    if mode is not PrimeSumMode.NEW:
        hecke = _old_hecke(kappa, q, tol)
        if hecke is not None:
            _check_reach(max(powers), max(hecke.basis), r * (r - m), q)
    total = 0.0
    if mode in (PrimeSumMode.NEW, PrimeSumMode.HARMONIC_AVERAGE):
        new = delta_grid(DeltaParams(q, kappa, tol), powers, [1])[:, 0]
        total += -2.0 / log_qr * float(np.dot(new, weights))
    if mode in (PrimeSumMode.OLD, PrimeSumMode.HARMONIC_AVERAGE):
        total += 2.0 / (q * log_qr) * _old_sum(hecke, powers, weights, False, tol)
    return total


def prime_sum_second_total(
    q: int, kappa: int, r: int, tf: TestFunction, source, tol: float = 1e-8
) -> float:
    """sum_{m=0}^{r-1} (-1)^m P2[Phi; r, m]."""
    return sum(
        (-1) ** m * prime_sum_second(q, kappa, r, m, tf, source, tol) for m in range(r)
    )


def prime_sum_second_reindexed(
    q: int, r: int, tf: TestFunction, system: HeckeSystem
) -> float:
    """The same alternating total written over j = r - m in 1..r."""
    _check_level(q, r)
    primes, weights = _weighted_primes(q, r, MAX_PRIME_RANGE, tf, 1.0, 2.0)
    total = 0.0
    for j in range(1, r + 1):
        values = [hecke_extend(system, int(p) ** (2 * j)) for p in primes]
        total += (-1) ** (r - j) * float(np.dot(values, weights))
    return -2.0 / (r * math.log(q)) * total


def covariance_prime_sum(
    q: int, r: int, tf1: TestFunction, tf2: TestFunction
) -> float:
    """4 / log^2(q^r) sum_p log^2(p) / p Phi_hat1 Phi_hat2(log p / log q^r).

    Tends to sigma12 = 2 int |u| Phi_hat1 Phi_hat2 as q grows, with an error of
    order 1 / log q.
    """
    _check_level(q, r)
    narrow = tf1 if tf1.nu <= tf2.nu else tf2
    primes, w1 = _weighted_primes(q, r, MAX_COVARIANCE_RANGE, narrow, 1.0, 1.0)
    if primes.size == 0:
        return 0.0
    log_qr = r * math.log(q)
    logp = np.log(primes.astype(float))
    other = tf2 if narrow is tf1 else tf1
    total = np.dot(w1 * logp, other.phi_hat(logp / log_qr))
    return float(4.0 / log_qr**2 * total)


@dataclass(frozen=True)
class PrimeSumEnvelopes:
    """q-power envelopes of the error terms (implied constants unknown).

    Attributes:
        new_first: New part of the averaged P1.
        old_first: Old part of the averaged P1, q^(r nu / 2 - 1).
        signed_old_first: sqrt(q) times the old part of the twisted P1.
        old_second: Old part of the averaged P2, q^-1.
    """

    new_first: float
    old_first: float
    signed_old_first: float
    old_second: float


def prime_sum_envelopes(
    q: int, kappa: int, r: int, nu: float, theta: float = THETA_DEFAULT
) -> PrimeSumEnvelopes:
    _check_level(q, r)
    big = r * r * nu
    new = q ** (((kappa - 1) / 2 - theta) * (big - 2)) + q ** (
        (kappa / 2 - theta) * big - (kappa - 0.5 - 2 * theta)
    )
    return PrimeSumEnvelopes(
        new_first=new,
        old_first=q ** (r * nu / 2 - 1),
        signed_old_first=q ** ((nu * r - 4) / 2),
        old_second=1.0 / q,
    )


def delta_estimate_envelope(m: int, n: int, q: int, kappa: int) -> float:
    """Size of Delta_q(m, n) - delta(m, n) for coprime m, n, up to a constant."""
    if math.gcd(m, n) != 1:
        raise ValueError(f"m and n must be coprime, got m={m}, n={n}")
    mn = m * n
    if mn > q * q:
        return mn**0.25 / q * math.log(mn / q**2)
    return mn ** ((kappa - 1) / 2) / q ** (kappa - 0.5)


def old_exponent(alpha1: float, alpha2: float, beta1: float, beta2: float) -> float:
    """Exponent delta of the old-form double prime sum, by the range of alpha."""
    first = beta1 * (1 - alpha1) if alpha1 < 1 else 0.0
    second = beta2 * (1 - alpha2) if alpha2 < 1 else 0.0
    return first + second


def old_envelope(
    q: int,
    nu: float,
    alpha1: float,
    alpha2: float,
    beta1: float = 1.0,
    beta2: float = 1.0,
    w: float = 0.0,
) -> float:
    """q^(delta nu - w / 2) for the old-form double prime sum."""
    return q ** (old_exponent(alpha1, alpha2, beta1, beta2) * nu - w / 2)
