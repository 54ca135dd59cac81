"""The Delta-symbol of the Petersson trace formula and its level-one oracles.

Delta_q(m, n) = delta(m, n) + 2 pi i^kappa sum_{q | c} S(m, n; c) / c
J_{kappa-1}(4 pi sqrt(mn) / c). The c-sum is cut at a modulus whose tail is
certified below ``tol`` by the Weil bound and the small-argument Bessel bound.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special

from .arith import factorize, is_prime, kloosterman_row
from .bessel import bessel_j
from .chebyshev import chebyshev_eval
from .kernels import cusp_form_dimension, i_power

logger = logging.getLogger(__name__)

MAX_MN = 1_000_000
MAX_MODULUS = 10_000_000
TAU_MAX = 10_000
TAU_WEIGHT = 12
PETERSSON_TOL = 1e-6
MAX_SUITE_N = 30
MODULUS_BLOCK = 64
# relative singular-value floor for the level-one Hecke basis
RANK_TOL = 1e-6


@dataclass(frozen=True)
class DeltaParams:
    """Level, weight and absolute truncation budget of a Delta-symbol."""

    q: int = 1
    kappa: int = 12
    tol: float = 1e-8

    def __post_init__(self) -> None:
        if self.q != 1 and not is_prime(self.q):
            raise ValueError(f"q must be 1 or a prime, got {self.q}")
        if self.kappa < 4 or self.kappa % 2:
            raise ValueError(f"kappa must be an even integer >= 4, got {self.kappa}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")


def tail_bound(dp: DeltaParams, m: int, n: int, k: int) -> float:
    """Certified bound on the c-sum over c = q j with j > k.

    Uses |S(m, n; c)| <= sqrt((m, n)) tau(c) sqrt(c), tau(c) <= 2 sqrt(c) and
    |J_s(y)| <= (y/2)^s / s!, then sums c^-s exactly with the Hurwitz zeta.
    """
    s = dp.kappa - 1
    log_amp = s * math.log(2.0 * math.pi * math.sqrt(m * n)) - math.lgamma(s + 1)
    log_amp -= s * math.log(dp.q)
    amp = 2.0 * math.pi * 2.0 * math.sqrt(math.gcd(m, n)) * math.exp(log_amp)
    return amp * float(special.zeta(s, k + 1))


def truncation_modulus(dp: DeltaParams, m: int, n: int) -> int:
    """Smallest C = q k whose certified tail is below ``dp.tol``.

    Raises:
        ValueError: If no C <= 1e7 reaches the budget; the message carries the
            achievable tolerance.
    """
    k_max = MAX_MODULUS // dp.q
    achievable = tail_bound(dp, m, n, k_max)
    if achievable >= dp.tol:
        raise ValueError(
            f"tolerance {dp.tol:g} unreachable for m={m}, n={n} within c <= "
            f"{MAX_MODULUS}; achievable tolerance {achievable:.3g}"
        )
    hi = 1
    while tail_bound(dp, m, n, hi) >= dp.tol:
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(dp, m, n, mid) < dp.tol:
            hi = mid
        else:
            lo = mid
    k = max(hi, 1)
    logger.debug("q=%d kappa=%d m=%d n=%d: C_max=%d", dp.q, dp.kappa, m, n, dp.q * k)
    return dp.q * k


def delta_grid(dp: DeltaParams, ms, ns) -> np.ndarray:
    """Delta_q(m, n) for every m in ``ms`` and n in ``ns``.

    One truncation modulus, certified for the largest pair, serves the whole
    grid; each modulus contributes through a single Kloosterman table. Moduli
    are summed in fixed blocks of ``MODULUS_BLOCK`` whose partial sums are
    added in increasing order of c.
    """
    ms = np.asarray(ms, dtype=np.int64)
    ns = np.asarray(ns, dtype=np.int64)
    if ms.size == 0 or ns.size == 0:
        return np.zeros((ms.size, ns.size))
    if np.any(ms < 1) or np.any(ns < 1):
        raise ValueError("m and n must be positive")
    if int(ms.max()) * int(ns.max()) > MAX_MN:
        raise ValueError(f"m*n must be <= {MAX_MN}")
    pairs = [(int(m), int(n)) for m in ms for n in ns]
    c_max = max(truncation_modulus(dp, m, n) for m, n in pairs)
    root = np.sqrt(np.outer(ms, ns).astype(float))
    moduli = range(dp.q, c_max + 1, dp.q)
    total = np.zeros(root.shape)
    for start in range(0, len(moduli), MODULUS_BLOCK):
        block = np.zeros(root.shape)
        for c in moduli[start : start + MODULUS_BLOCK]:
            kloos = kloosterman_row(ms, ns, c)
            block += kloos * bessel_j(dp.kappa - 1, 4.0 * math.pi * root / c) / c
        total += block
    diagonal = (ms[:, None] == ns[None, :]).astype(float)
    return diagonal + 2.0 * math.pi * i_power(dp.kappa) * total


def delta_symbol(dp: DeltaParams, m: int, n: int) -> float:
    """Delta_q(m, n) truncated with certified tail below ``dp.tol``."""
    return float(delta_grid(dp, [m], [n])[0, 0])


def _truncated_product(a: list[int], b: list[int], order: int) -> list[int]:
    out = [0] * (order + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(order + 1 - i):
                out[i + j] += x * b[j]
    return out


def euler_product_power(order: int, power: int) -> list[int]:
    """Coefficients of prod_{k>=1} (1 - x^k)^power up to x^order.

    Pentagonal-number series raised by repeated squaring with exact integer
    convolutions; quadratic in ``order``.
    """
    base = _pentagonal_series(order)
    result = [1] + [0] * order
    while power:
        if power % 2:
            result = _truncated_product(result, base, order)
        base = _truncated_product(base, base, order)
        power //= 2
    return result


def _pentagonal_series(order: int) -> list[int]:
    """prod (1 - x^k) = sum_j (-1)^j x^(j(3j-1)/2) over all integers j."""
    coeffs = [0] * (order + 1)
    coeffs[0] = 1
    j = 1
    while j * (3 * j - 1) // 2 <= order:
        sign = -1 if j % 2 else 1
        for e in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if e <= order:
                coeffs[e] = sign
        j += 1
    return coeffs


def _power_by_recurrence(order: int, power: int) -> list[int]:
    """Same coefficients via c_n = (1/n) sum_k ((power+1) k - n) p_k c_{n-k}.

    The recurrence for the power of a series with constant term 1 only touches
    the O(sqrt(n)) pentagonal exponents, so it scales to ``TAU_MAX``.
    """
    base = _pentagonal_series(order)
    support = [(k, int(base[k])) for k in range(1, order + 1) if base[k]]
    coeffs = [1] + [0] * order
    for n in range(1, order + 1):
        acc = 0
        for k, p in support:
            if k > n:
                break
            acc += ((power + 1) * k - n) * p * coeffs[n - k]
        coeffs[n] = acc // n
    return coeffs


@dataclass(frozen=True)
class TauTable:
    """Ramanujan tau(n) for n <= max_n, from q prod (1 - q^k)^24."""

    max_n: int
    values: tuple[int, ...] = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.values) != self.max_n + 1:
            raise ValueError("values must cover 0..max_n")
        if self.max_n >= 2 and (self.values[1], self.values[2]) != (1, -24):
            raise ValueError("table fails tau(1) = 1, tau(2) = -24")
        if self.max_n >= 6 and self.values[6] != self.values[2] * self.values[3]:
            raise ValueError("table fails tau(6) = tau(2) tau(3)")

    @classmethod
    def build(cls, max_n: int) -> TauTable:
        if not 1 <= max_n <= TAU_MAX:
            raise ValueError(f"max_n must lie in [1, {TAU_MAX}], got {max_n}")
        coeffs = _power_by_recurrence(max_n - 1, 24)
        return cls(max_n, (0, *coeffs))

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.max_n:
            raise ValueError(f"n must lie in [1, {self.max_n}], got {n}")
        return self.values[n]


@lru_cache(maxsize=1)
def _tau_table() -> TauTable:
    return TauTable.build(TAU_MAX)


def ramanujan_tau(n: int) -> int:
    """Exact tau(n) for 1 <= n <= 10^4."""
    return _tau_table()[n]


def tau_normalized(n: int) -> float:
    """lambda(n) = tau(n) / n^(11/2), extended multiplicatively past the table."""
    value = 1.0
    for p, e in factorize(n).factors:
        if p > TAU_MAX:
            raise ValueError(f"prime {p} exceeds the tau table ({TAU_MAX})")
        value *= chebyshev_eval(e, ramanujan_tau(p) / p**5.5)
    return value


@lru_cache(maxsize=8)
def harmonic_weight_level_one(tol: float = 1e-10) -> float:
    """Delta_1(1, 1) at weight 12, the harmonic weight of the unique eigenform."""
    return delta_symbol(DeltaParams(1, TAU_WEIGHT, tol), 1, 1)


def level_one_delta(kappa: int, m: int, n: int, tol: float = 1e-8) -> float:
    """Delta_1(m, n) through the spectral side when it is known.

    Zero when there are no level-one cusp forms of weight kappa; the rank-one
    value omega lambda(m) lambda(n) at weight 12; the Kloosterman-Bessel series
    otherwise.
    """
    if cusp_form_dimension(kappa) == 0:
        return 0.0
    if kappa == TAU_WEIGHT:
        return harmonic_weight_level_one() * tau_normalized(m) * tau_normalized(n)
    return delta_symbol(DeltaParams(1, kappa, tol), m, n)


@dataclass(frozen=True)
class LevelOneHecke:
    """T_p on the level-one cusp forms of weight kappa, read off Delta_1.

    For indices b coprime to p, A = Delta_1(b, b') and B = Delta_1(p b, b')
    give M = A^-1 B, whose eigenvalues are the lambda_g(p) of the level-one
    eigenforms g, and for every polynomial P

        sum_g omega_g lambda_g(m) P(lambda_g(p)) = Delta_1(m, basis) . P(M) e_1.

    Attributes:
        kappa: Weight.
        prime: The prime p.
        basis: Indices coprime to p, starting with 1.
        omega: Delta_1(1, 1), the total harmonic weight.
        hecke: The matrix M.
        tol: Truncation budget of every Delta-symbol.
    """

    kappa: int
    prime: int
    basis: tuple[int, ...]
    omega: float
    hecke: np.ndarray = field(repr=False, compare=False)
    tol: float = 1e-8

    @classmethod
    def build(cls, kappa: int, prime: int, tol: float = 1e-8) -> LevelOneHecke:
        """Pick a basis of rank dim S_kappa(1) greedily and solve for M.

        Raises:
            ValueError: If there are no cusp forms of weight ``kappa`` or
                ``prime`` is not prime.
        """
        dim = cusp_form_dimension(kappa)
        if dim == 0:
            raise ValueError(f"no level-one cusp forms of weight {kappa}")
        if not is_prime(prime):
            raise ValueError(f"p must be prime, got {prime}")
        if kappa == TAU_WEIGHT and prime <= TAU_MAX:
            hecke = np.array([[tau_normalized(prime)]])
            return cls(kappa, prime, (1,), harmonic_weight_level_one(), hecke, tol)
        dp = DeltaParams(1, kappa, tol)
        candidates = [k for k in range(1, 4 * dim + 8) if k % prime][: 2 * dim + 1]
        grid = delta_grid(dp, candidates, candidates)
        chosen = [0]
        for i in range(1, len(candidates)):
            if len(chosen) == dim:
                break
            trial = [*chosen, i]
            sv = np.linalg.svd(grid[np.ix_(trial, trial)], compute_uv=False)
            if sv[-1] > RANK_TOL * sv[0]:
                chosen = trial
        if len(chosen) < dim:
            raise ValueError(f"no Hecke basis of rank {dim} among {candidates}")
        basis = tuple(candidates[i] for i in chosen)
        gram = grid[np.ix_(chosen, chosen)]
        shifted = delta_grid(dp, [prime * b for b in basis], basis)
        hecke = np.linalg.solve(gram, shifted)
        logger.debug("T_%d at weight %d: basis %s", prime, kappa, basis)
        return cls(kappa, prime, basis, float(gram[0, 0]), hecke, tol)

    def eigenvalues(self) -> np.ndarray:
        """lambda_g(p) for the level-one eigenforms, ascending."""
        return np.sort(np.linalg.eigvals(self.hecke).real)

    def rows(self, ms) -> np.ndarray:
        """Delta_1(m, b) for every m in ``ms`` and b in the basis."""
        if self.kappa == TAU_WEIGHT and all(_in_tau_table(int(m)) for m in ms):
            values = [level_one_delta(TAU_WEIGHT, int(m), 1) for m in ms]
            return np.array(values, dtype=float).reshape(-1, 1)
        return delta_grid(DeltaParams(1, self.kappa, self.tol), ms, self.basis)

    def chebyshev_vectors(self):
        """Yield X_k(M) e_1 for k = 0, 1, 2, ..."""
        prev = np.zeros(len(self.basis))
        cur = np.eye(len(self.basis))[0]
        while True:
            yield cur
            prev, cur = cur, self.hecke @ cur - prev


def _in_tau_table(m: int) -> bool:
    return all(p <= TAU_MAX for p in factorize(m).primes)


@lru_cache(maxsize=32)
def level_one_hecke(kappa: int, prime: int, tol: float = 1e-8) -> LevelOneHecke:
    """Cached ``LevelOneHecke.build``."""
    return LevelOneHecke.build(kappa, prime, tol)


@dataclass(frozen=True)
class PeterssonReport:
    """Outcome of the level-one trace formula checks.

    Attributes:
        kappa: Weight.
        n_max: Grid size.
        max_deviation: Largest deviation over all checks.
        failures: Offending (m, n) pairs.
    """

    kappa: int
    n_max: int
    max_deviation: float
    failures: tuple[tuple[int, int], ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures


def petersson_ratio_suite(
    kappa: int, n_max: int, tol: float = 1e-8
) -> PeterssonReport:
    """Check the Petersson formula at level 1 on the grid 1 <= m, n <= n_max.

    Weight 10 has no cusp forms, so Delta_1 vanishes. Weight 12 has the single
    eigenform Delta, so Delta_1(n, 1) / Delta_1(1, 1) = tau(n) / n^(11/2) and
    Delta_1(m, n) Delta_1(1, 1) = Delta_1(m, 1) Delta_1(n, 1).
    """
    if kappa not in (10, 12):
        raise ValueError(f"kappa must be 10 or 12, got {kappa}")
    if not 1 <= n_max <= MAX_SUITE_N:
        raise ValueError(f"n_max must lie in [1, {MAX_SUITE_N}], got {n_max}")
    idx = np.arange(1, n_max + 1)
    grid = delta_grid(DeltaParams(1, kappa, tol), idx, idx)
    failures: list[tuple[int, int]] = []
    if kappa == 10:
        dev = np.abs(grid)
    else:
        omega = grid[0, 0]
        tau = np.array([ramanujan_tau(int(k)) / k**5.5 for k in idx])
        ratio_dev = np.abs(grid[:, 0] / omega - tau)
        dev = np.abs(grid * omega - np.outer(grid[:, 0], grid[0, :]))
        dev[:, 0] = np.maximum(dev[:, 0], ratio_dev)
    for i, j in zip(*np.nonzero(dev >= PETERSSON_TOL)):
        failures.append((int(idx[i]), int(idx[j])))
    max_dev = float(dev.max())
    logger.info(
        "petersson kappa=%d n_max=%d max deviation %.3g", kappa, n_max, max_dev
    )
    return PeterssonReport(kappa, n_max, max_dev, tuple(failures))
