"""Restricted-growth surjections and the index-collapsing identity of moments.

A surjection sigma: {1..alpha} -> {1..s} in restricted-growth form is the
canonical label sequence of a set partition of {1..alpha} into s blocks.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache

MAX_ALPHA = 12
MAX_PAIR_ALPHA = 20


@dataclass(frozen=True)
class RGSurjection:
    """A restricted-growth surjection with labels in 1..s."""

    alpha: int
    s: int
    sigma: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.sigma) != self.alpha:
            raise ValueError("sigma must have length alpha")
        if not is_restricted_growth(self.sigma) or max(self.sigma) != self.s:
            raise ValueError(f"{self.sigma} is not a restricted-growth surjection")

    @property
    def profile(self) -> tuple[int, ...]:
        """Block sizes varpi_1, ..., varpi_s."""
        counts = Counter(self.sigma)
        return tuple(counts[u] for u in range(1, self.s + 1))

    def blocks(self) -> tuple[frozenset[int], ...]:
        """The induced set partition of {0, ..., alpha - 1}."""
        return tuple(
            frozenset(j for j, u in enumerate(self.sigma) if u == label)
            for label in range(1, self.s + 1)
        )


def is_restricted_growth(sigma: Sequence[int]) -> bool:
    """sigma[0] = 1 and every label exceeds the running maximum by at most 1."""
    running = 0
    for u in sigma:
        if u < 1 or u > running + 1:
            return False
        running = max(running, u)
    return True


def _grow(
    prefix: list[int], running: int, alpha: int, s: int
) -> Iterator[tuple[int, ...]]:
    remaining = alpha - len(prefix)
    if remaining == 0:
        if running == s:
            yield tuple(prefix)
        return
    # Not enough positions left to reach label s.
    if s - running > remaining:
        return
    for u in range(1, min(running + 1, s) + 1):
        prefix.append(u)
        yield from _grow(prefix, max(running, u), alpha, s)
        prefix.pop()


def enumerate_rg(alpha: int, s: int) -> list[RGSurjection]:
    """All restricted-growth surjections {1..alpha} -> {1..s}.

    Built depth-first while tracking the running maximum label.
    """
    if not 1 <= s <= alpha <= MAX_ALPHA:
        raise ValueError(
            f"need 1 <= s <= alpha <= {MAX_ALPHA}, got alpha={alpha}, s={s}"
        )
    return [RGSurjection(alpha, s, sigma) for sigma in _grow([], 0, alpha, s)]


def brute_force_rg(alpha: int, s: int) -> list[tuple[int, ...]]:
    """Filter all s^alpha maps; an oracle for small sizes."""
    return [
        sigma
        for sigma in itertools.product(range(1, s + 1), repeat=alpha)
        if max(sigma) == s and is_restricted_growth(sigma)
    ]


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind, S(n, k) = k S(n-1, k) + S(n-1, k-1)."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def filter_profile(
    items: Sequence[RGSurjection], predicate: Callable[[int], bool]
) -> list[RGSurjection]:
    """Keep the surjections whose every block size satisfies ``predicate``."""
    return [sigma for sigma in items if all(predicate(w) for w in sigma.profile)]


def at_least_two(w: int) -> bool:
    return w >= 2


def exactly_two(w: int) -> bool:
    return w == 2


def count_pair_partitions(alpha: int) -> int:
    """alpha! / (2^(alpha/2) (alpha/2)!), the number of perfect matchings."""
    if alpha < 2 or alpha % 2 or alpha > MAX_PAIR_ALPHA:
        raise ValueError(f"alpha must be even in [2, {MAX_PAIR_ALPHA}], got {alpha}")
    half = alpha // 2
    return math.factorial(alpha) // (2**half * math.factorial(half))


def singleton_count(sigma: RGSurjection) -> int:
    """Number of blocks of size one."""
    return sum(1 for w in sigma.profile if w == 1)


def reorder_check(
    m: int, g: Callable[..., float], xs: Sequence[float]
) -> tuple[float, float]:
    """Both sides of the distinct-index reordering of an m-fold sum.

    The left side sums g over all index tuples; the right side groups tuples
    by the set partition of equal indices, summing over distinct indices.

    Returns:
        ``(lhs, rhs)``.
    """
    if not 1 <= m <= 5 or len(xs) > 8:
        raise ValueError(f"need m <= 5 and at most 8 points, got m={m}, {len(xs)}")
    idx = range(len(xs))
    tuples = itertools.product(idx, repeat=m)
    lhs = math.fsum(g(*(xs[j] for j in tup)) for tup in tuples)
    terms = []
    for s in range(1, m + 1):
        for sigma in enumerate_rg(m, s):
            for distinct in itertools.permutations(idx, s):
                terms.append(g(*(xs[distinct[u - 1]] for u in sigma.sigma)))
    return lhs, math.fsum(terms)
