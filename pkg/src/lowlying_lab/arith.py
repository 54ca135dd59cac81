"""Arithmetic primitives: primes, factorizations and Kloosterman sums.

Kloosterman sums are accumulated as real cosines, S(m, n; c) being real
because the residues x and -x contribute conjugate phases.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

logger = logging.getLogger(__name__)

# Trial division stops here; larger cofactors go to Miller-Rabin / Pollard-Brent.
TRIAL_LIMIT = 1_000_000
MAX_INT64 = 2**63 - 1

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def primes_up_to(n: int) -> np.ndarray:
    """Return all primes p <= n as an int64 array (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(int(p) for p in primes_up_to(TRIAL_LIMIT))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n."""
    rng = random.Random(n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split_large(d, out)
    _split_large(n // d, out)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of a positive integer."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        primes = [p for p, _ in self.factors]
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise ValueError("primes must be strictly increasing")
        if math.prod(p**e for p, e in self.factors) != self.n:
            raise ValueError(f"factors do not multiply to {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def divisor_count(self) -> int:
        return math.prod(e + 1 for _, e in self.factors)

    @property
    def nu(self) -> int:
        """n * prod_{p | n} (1 + 1/p)."""
        return math.prod(p ** (e - 1) * (p + 1) for p, e in self.factors)

    @property
    def mobius(self) -> int:
        if any(e > 1 for _, e in self.factors):
            return 0
        return -1 if len(self.factors) % 2 else 1

    def divisors(self) -> list[int]:
        """All positive divisors in increasing order."""
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    """Factor n by trial division, finishing large cofactors with Pollard-Brent.

    Args:
        n: Integer with 1 <= n <= 2**63 - 1.

    Returns:
        The factorization of ``n``.
    """
    if n < 1 or n > MAX_INT64:
        raise ValueError(f"n must lie in [1, 2**63 - 1], got {n}")
    out: dict[int, int] = {}
    rest = n
    for p in _small_primes():
        if p * p > rest:
            break
        while rest % p == 0:
            out[p] = out.get(p, 0) + 1
            rest //= p
    if rest > 1:
        _split_large(rest, out)
    return Factorization(n, tuple(sorted(out.items())))


def divisor_count(n: int) -> int:
    """tau(n), the number of positive divisors."""
    return factorize(n).divisor_count


def nu_mult(n: int) -> int:
    """The multiplicative function n * prod_{p | n}(1 + 1/p)."""
    return factorize(n).nu


def mobius(n: int) -> int:
    return factorize(n).mobius


def divisor_count_table(n: int) -> np.ndarray:
    """tau(d) for d = 0..n (entry 0 unused) by a divisor sieve."""
    table = np.zeros(n + 1, dtype=np.int64)
    for k in range(1, n + 1):
        table[k::k] += 1
    return table


def modular_inverse(a: int, m: int) -> int:
    """Inverse of a modulo m via the extended Euclidean algorithm.

    Raises:
        ValueError: If gcd(a, m) != 1.
    """
    if m == 1:
        return 0
    old_r, r = a % m, m
    old_s, s = 1, 0
    while r:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_s, s = s, old_s - quotient * s
    if old_r != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return old_s % m


@lru_cache(maxsize=4096)
def _unit_table(c: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced residues x mod c and their inverses."""
    units = [x for x in range(1, c) if math.gcd(x, c) == 1]
    x = np.array(units, dtype=np.int64)
    xbar = np.array([pow(u, -1, c) for u in units], dtype=np.int64)
    x.setflags(write=False)
    xbar.setflags(write=False)
    return x, xbar


def _check_modulus(c: int) -> None:
    if c < 1:
        raise ValueError(f"modulus c must be >= 1, got {c}")


def kloosterman(m: int, n: int, c: int) -> float:
    """The Kloosterman sum S(m, n; c).

    Args:
        m: First frequency (any integer, reduced mod c).
        n: Second frequency.
        c: Modulus, c >= 1.

    Returns:
        sum over x mod c with (x, c) = 1 of cos(2 pi (m x + n xbar) / c).
    """
    _check_modulus(c)
    if c == 1:
        return 1.0
    x, xbar = _unit_table(c)
    phase = ((m % c) * x + (n % c) * xbar) % c
    return float(np.cos(2.0 * np.pi * phase / c).sum())


def kloosterman_complex(m: int, n: int, c: int) -> complex:
    """S(m, n; c) accumulated as a complex exponential sum (realness checks)."""
    _check_modulus(c)
    if c == 1:
        return complex(1.0)
    x, xbar = _unit_table(c)
    phase = ((m % c) * x + (n % c) * xbar) % c
    return complex(np.exp(2j * np.pi * phase / c).sum())


def kloosterman_row(ms, ns, c: int) -> np.ndarray:
    """S(m, n; c) for every pair of a grid, at a single modulus.

    Args:
        ms: Sequence of first frequencies.
        ns: Sequence of second frequencies.
        c: Modulus.

    Returns:
        Array of shape ``(len(ms), len(ns))``.
    """
    _check_modulus(c)
    ms = np.asarray(ms, dtype=np.int64)
    ns = np.asarray(ns, dtype=np.int64)
    if c == 1:
        return np.ones((ms.size, ns.size))
    x, xbar = _unit_table(c)
    nx = ((ns % c)[:, None] * xbar[None, :]) % c
    out = np.empty((ms.size, ns.size))
    for i, m in enumerate(ms % c):
        phase = (m * x[None, :] + nx) % c
        out[i] = np.cos(2.0 * np.pi * phase / c).sum(axis=1)
    return out


def kloosterman_crt(m: int, n: int, q: int, r: int) -> float:
    """S(m, n; qr) through the twisted multiplicativity of Kloosterman sums.

    Returns:
        S(m qbar^2, n; r) * S(m rbar^2, n; q), with qbar = q^-1 mod r and
        rbar = r^-1 mod q.
    """
    if math.gcd(q, r) != 1:
        raise ValueError(f"q and r must be coprime, got q={q}, r={r}")
    qbar = modular_inverse(q, r)
    rbar = modular_inverse(r, q)
    return kloosterman(m * qbar * qbar, n, r) * kloosterman(m * rbar * rbar, n, q)


def kloosterman_special(p: int, gamma: int, q: int, r: int) -> float:
    """S(p^gamma q, 1; q r) by direct summation."""
    return kloosterman(p**gamma * q, 1, q * r)


def kloosterman_special_closed(p: int, gamma: int, q: int, r: int) -> float:
    """Closed form of S(p^gamma q, 1; q r) for primes p != q.

    Equals -S(p^gamma qbar, 1; r) when (q, r) = 1 and vanishes when q | r.
    """
    if r % q == 0:
        return 0.0
    qbar = modular_inverse(q, r)
    return -kloosterman(p**gamma * qbar, 1, r)


def weil_bound(m: int, n: int, c: int) -> float:
    """sqrt(gcd(m, n, c)) * tau(c) * sqrt(c)."""
    g = reduce(math.gcd, (m, n, c))
    return math.sqrt(g) * divisor_count(c) * math.sqrt(c)
