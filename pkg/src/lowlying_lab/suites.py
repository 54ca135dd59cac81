"""Verification suites: one per module, each a list of pass/fail rows."""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable
from dataclasses import replace

import numpy as np
from scipy import special

from . import arith, chebyshev, kernels, partitions, testfn
from .bessel import BesselMethod, bessel_j
from .config import RunConfig
from .deltasym import (
    DeltaParams,
    TauTable,
    delta_symbol,
    euler_product_power,
    petersson_ratio_suite,
)
from .experiments import monitor_rows, rmt_rows
from .performance import PerformanceMonitor
from .primesums import prime_sum_second_reindexed, prime_sum_second_total
from .report import ResultRow
from .rmt import (
    TwoLevelMethod,
    eigenphases_to_zeros,
    sample_matrix,
    two_level_stat,
)
from .testfn import Family, TestFunction

logger = logging.getLogger(__name__)

CRT_PAIRS = 100
WEIL_MAX_C = 2000
REORDER_TRIALS = 25
IDENTITY_SAMPLES = 100
IDENTITY_TOL = 1e-9
MOMENT_SAMPLES = 100_000
WIDE_NU = 0.9


def _rng(config: RunConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([config.seed, salt])


def arith_suite(config: RunConfig) -> list[ResultRow]:
    """Kloosterman identities, primality and factorization."""
    rng = _rng(config, 1)
    rows = []

    crt_dev = 0.0
    done = 0
    while done < CRT_PAIRS:
        a, b = (int(v) for v in rng.integers(2, 100, size=2))
        if math.gcd(a, b) != 1:
            continue
        m, n = (int(v) for v in rng.integers(-500, 500, size=2))
        direct = arith.kloosterman(m, n, a * b)
        crt_dev = max(crt_dev, abs(arith.kloosterman_crt(m, n, a, b) - direct))
        done += 1
    rows.append(ResultRow.compare("arith.kloosterman.crt", crt_dev, 0.0, 1e-8))

    rows.append(
        ResultRow.compare("arith.kloosterman.zero", arith.kloosterman(6, 1, 9), 0, 1e-9)
    )
    rows.append(
        ResultRow.compare("arith.kloosterman.unit", arith.kloosterman(6, 1, 6), 1, 1e-9)
    )
    special_dev = 0.0
    for p, gamma, q, r in itertools.product((2, 3, 5), (1, 2), (7, 11), (4, 9, 14, 33)):
        if p == q:
            continue
        closed = arith.kloosterman_special_closed(p, gamma, q, r)
        special_dev = max(
            special_dev, abs(arith.kloosterman_special(p, gamma, q, r) - closed)
        )
    rows.append(ResultRow.compare("arith.kloosterman.special", special_dev, 0.0, 1e-8))

    weil_ok = True
    imag_ok = True
    symmetric_dev = 0.0
    for c in range(1, WEIL_MAX_C + 1):
        m, n = (int(v) for v in rng.integers(1, 10 * c + 2, size=2))
        value = arith.kloosterman(m, n, c)
        weil_ok &= abs(value) <= arith.weil_bound(m, n, c) + 1e-9
        imag_ok &= abs(arith.kloosterman_complex(m, n, c).imag) < 1e-10 * c
        symmetric_dev = max(symmetric_dev, abs(arith.kloosterman(n, m, c) - value))
    rows.append(ResultRow.check("arith.kloosterman.weil", weil_ok))
    rows.append(ResultRow.check("arith.kloosterman.real", imag_ok))
    rows.append(
        ResultRow.compare("arith.kloosterman.symmetric", symmetric_dev, 0, 1e-9)
    )

    table = arith.divisor_count_table(1000)
    tau_ok = all(table[k] == arith.divisor_count(k) for k in range(1, 1001))
    rows.append(ResultRow.check("arith.divisor_count_table", tau_ok))
    big = 2**61 - 1
    rows.append(ResultRow.check("arith.is_prime.mersenne61", arith.is_prime(big)))
    composite = 1_000_003 * 998_244_353
    parts = arith.factorize(composite).factors
    rows.append(
        ResultRow.check(
            "arith.factorize.pollard", parts == ((1_000_003, 1), (998_244_353, 1))
        )
    )
    return rows


def chebyshev_suite(config: RunConfig) -> list[ResultRow]:
    """Linearization coefficients and Hecke relations."""
    rows = []
    ortho = max(
        abs(chebyshev.linearization_quadrature(1, i, j) - (i == j))
        for i in range(13)
        for j in range(13)
    )
    rows.append(ResultRow.compare("chebyshev.orthonormal", ortho, 0.0, 1e-8))

    lin_dev = 0.0
    exact_ok = True
    for varpi, r in itertools.product(range(1, 7), range(1, 7)):
        table = chebyshev.linearization_table(varpi, r)
        for j in range(varpi * r + 1):
            quad = chebyshev.linearization_quadrature(varpi, r, j)
            lin_dev = max(lin_dev, abs(quad - table[j]))
            if (j - varpi * r) % 2 and table[j] != 0:
                exact_ok = False
        if varpi == 1:
            exact_ok &= table[0] == 0
    for r in range(1, 7):
        exact_ok &= chebyshev.linearization_table(2, r)[0] == 1
    rows.append(ResultRow.compare("chebyshev.linearization", lin_dev, 0.0, 1e-8))
    rows.append(ResultRow.check("chebyshev.linearization.exact", exact_ok))

    catalan_ok = all(
        chebyshev.linearization_table(2 * k, 1)[0] == chebyshev.catalan(k)
        for k in range(1, 7)
    )
    rows.append(ResultRow.check("chebyshev.catalan", catalan_ok))

    gen_ok = all(
        chebyshev.generating_function_check(x, t, 40).ok
        for x in np.linspace(-2.0, 2.0, 9)
        for t in np.linspace(-0.4, 0.4, 9)
    )
    rows.append(ResultRow.check("chebyshev.generating_function", gen_ok))

    rng = _rng(config, 2)
    primes = arith.primes_up_to(50)
    system = chebyshev.HeckeSystem.random(primes, rng)
    hecke_ok = all(
        abs(chebyshev.hecke_extend(system, ell)) <= arith.divisor_count(ell) + 1e-9
        for ell in range(1, 500)
        if max(arith.factorize(ell).primes, default=1) <= 50
    )
    rows.append(ResultRow.check("chebyshev.hecke_bound", hecke_ok))

    # lambda(l1 l2) = sum_{d | (l1, l2)} mu(d) lambda(l1 / d) lambda(l2 / d)
    mobius_dev = 0.0
    for l1, l2 in itertools.combinations(range(1, 41), 2):
        rhs = sum(
            arith.mobius(d)
            * chebyshev.hecke_extend(system, l1 // d)
            * chebyshev.hecke_extend(system, l2 // d)
            for d in arith.factorize(math.gcd(l1, l2)).divisors()
        )
        lhs = chebyshev.hecke_extend(system, l1 * l2)
        mobius_dev = max(mobius_dev, abs(lhs - rhs))
    rows.append(ResultRow.compare("chebyshev.hecke_relation", mobius_dev, 0.0, 1e-9))
    return rows


def partitions_suite(config: RunConfig) -> list[ResultRow]:
    """Set partition counts and the reordering identity."""
    rows = []
    counts_ok = True
    canonical_ok = True
    profile_ok = True
    for alpha in range(1, 11):
        for s in range(1, alpha + 1):
            items = partitions.enumerate_rg(alpha, s)
            counts_ok &= len(items) == partitions.stirling2(alpha, s)
            blocks = {frozenset(sigma.blocks()) for sigma in items}
            canonical_ok &= len(blocks) == len(items)
            profile_ok &= all(sum(sigma.profile) == alpha for sigma in items)
    rows.append(ResultRow.check("partitions.stirling", counts_ok))
    rows.append(ResultRow.check("partitions.canonical", canonical_ok))
    rows.append(ResultRow.check("partitions.profile_sum", profile_ok))

    brute_ok = all(
        [sigma.sigma for sigma in partitions.enumerate_rg(alpha, s)]
        == partitions.brute_force_rg(alpha, s)
        for alpha in range(1, 5)
        for s in range(1, alpha + 1)
    )
    rows.append(ResultRow.check("partitions.brute_force", brute_ok))

    pairs_ok = all(
        len(
            partitions.filter_profile(
                partitions.enumerate_rg(alpha, alpha // 2), partitions.exactly_two
            )
        )
        == expected
        for alpha, expected in ((2, 1), (4, 3), (6, 15), (8, 105))
    )
    rows.append(ResultRow.check("partitions.pairings", pairs_ok))

    rng = _rng(config, 3)
    reorder_dev = 0.0
    for m in range(1, 5):
        for _ in range(REORDER_TRIALS):
            xs = list(rng.uniform(-1.0, 1.0, size=int(rng.integers(1, 9))))
            weights = rng.uniform(-1.0, 1.0, size=m)

            def g(*args, weights=weights):
                return math.cos(float(np.dot(weights, args))) + args[0] * args[-1]

            lhs, rhs = partitions.reorder_check(m, g, xs)
            reorder_dev = max(reorder_dev, abs(lhs - rhs) / max(1.0, abs(lhs)))
    rows.append(ResultRow.compare("partitions.reorder", reorder_dev, 0.0, 1e-10))
    return rows


def testfn_suite(config: RunConfig) -> list[ResultRow]:
    """Support, evenness and Fourier pairs of the test functions."""
    rows = []
    grid = np.linspace(-20.0, 20.0, 161)
    for family in Family:
        for nu in (0.5, 1.5):
            tf = TestFunction(family, nu)
            name = f"testfn.{family.value}.nu{nu:g}"
            u = np.linspace(nu + 1e-9, nu + 5.0, 50)
            rows.append(ResultRow.check(f"{name}.support", np.all(tf.phi_hat(u) == 0)))
            even = np.allclose(
                tf.phi(grid), tf.phi(-grid), rtol=0, atol=1e-14
            ) and np.array_equal(tf.phi_hat(grid), tf.phi_hat(-grid))
            rows.append(ResultRow.check(f"{name}.even", even))
            pair = testfn.fourier_pair_check(tf, np.linspace(-5.0, 5.0, 41))
            rows.append(ResultRow.compare(f"{name}.fourier_pair", pair, 0.0, 1e-8))
    fejer = TestFunction(Family.FEJER, 0.5)
    rows.append(ResultRow.check("testfn.fejer.positive", np.all(fejer.phi(grid) >= 0)))
    other = TestFunction(Family.FEJER, 0.8)
    direct = testfn.direct_product_integral(fejer, other)
    prodhat = testfn.pair_integrals(fejer, other).prodhat0
    rows.append(ResultRow.compare("testfn.parseval", direct, prodhat, 1e-6))
    return rows


def kernels_suite(config: RunConfig) -> list[ResultRow]:
    """Plancherel pairs, root numbers and support thresholds."""
    rows = []
    for family in Family:
        for nu in (0.5, 1.5):
            tf = TestFunction(family, nu)
            for cls in kernels.SymmetryClass:
                pair = kernels.plancherel_integral(cls, tf)
                name = f"kernels.plancherel.{cls.value}.{family.value}.nu{nu:g}"
                rows.append(ResultRow.compare(name, pair.direct, pair.fourier, 1e-6))

    tf = TestFunction(Family.FEJER, 0.9)
    even = kernels.plancherel_integral(kernels.SymmetryClass.SO_EVEN, tf).fourier
    odd = kernels.plancherel_integral(kernels.SymmetryClass.SO_ODD, tf).fourier
    rows.append(ResultRow.compare("kernels.indistinguishable", even, odd, 1e-10))

    for family in Family:
        tf = TestFunction(family, 0.5)
        for r in range(1, 5):
            predicted = kernels.predicted_one_level(r, tf)
            pair = kernels.plancherel_integral(kernels.symmetry_type(r), tf)
            name = f"kernels.one_level.{family.value}.r{r}"
            rows.append(ResultRow.compare(name, predicted, pair.fourier, 1e-8))

    table_ok = True
    bijective = True
    for kappa in (12, 14, 16, 18):
        for r in range(1, 17):
            signs = {
                kernels.sign_functional_equation(kernels.SignData(kappa, r, eps))
                for eps in (1, -1)
            }
            if r % 2 == 0:
                table_ok &= signs == {1}
                continue
            bijective &= signs == {1, -1}
            expected = (
                (r % 8 == 1 and kappa % 4 == 0)
                or (r % 8 == 5 and kappa % 4 == 2)
                or r % 8 == 7
            )
            table_ok &= kernels.same_symmetry_type(r, kappa) == expected
    rows.append(ResultRow.check("kernels.sign_table", table_ok))
    rows.append(ResultRow.check("kernels.sign_bijection", bijective))

    floor_ok = True
    nu1_ok = True
    for r in range(1, 7):
        at_two = kernels.support_bounds(kernels.SupportBoundParams(r, 2))
        floor_ok &= math.isclose(at_two.nu1max, 82.0 / (57.0 * r * r), rel_tol=1e-12)
    for kappa in range(2, 40, 2):
        bounds = kernels.support_bounds(kernels.SupportBoundParams(1, kappa))
        nu1_ok &= bounds.nu1max > 1
    rows.append(ResultRow.check("kernels.support_floor", floor_ok))
    rows.append(ResultRow.check("kernels.support_r1", nu1_ok))
    return rows


def rmt_suite(config: RunConfig) -> list[ResultRow]:
    """Haar ensembles: zero symmetry, the two-level identity, Monte Carlo."""
    rows = []
    rng = _rng(config, 4)
    tf1 = TestFunction(config.family, config.nu)
    tf2 = TestFunction(Family.FEJER, 0.7)
    for cls in kernels.SymmetryClass:
        identity_dev = 0.0
        symmetric = True
        for _ in range(IDENTITY_SAMPLES):
            zs = eigenphases_to_zeros(sample_matrix(cls, config.size, rng), cls)
            direct = two_level_stat(zs, tf1, tf2, TwoLevelMethod.DIRECT)
            via = two_level_stat(zs, tf1, tf2, TwoLevelMethod.VIA_IDENTITY)
            identity_dev = max(identity_dev, abs(direct - via))
            symmetric &= bool(np.array_equal(zs.zeros, -zs.zeros[::-1]))
        name = f"rmt.{cls.value}"
        rows.append(
            ResultRow.compare(f"{name}.d2_identity", identity_dev, 0.0, IDENTITY_TOL)
        )
        rows.append(ResultRow.check(f"{name}.symmetric_zeros", symmetric))

    for stat in ("d1", "d2"):
        for cls in kernels.SymmetryClass:
            sub = replace(config, stat=stat)
            rows.extend(rmt_rows(sub, cls.value))
    for cls in kernels.SymmetryClass:
        sub = replace(config, stat="d1", nu=WIDE_NU)
        for row in rmt_rows(sub, cls.value):
            rows.append(replace(row, name=f"{row.name}.nu{WIDE_NU:g}"))
    for stat in ("variance", "moments"):
        sub = replace(config, stat=stat, samples=MOMENT_SAMPLES)
        rows.extend(rmt_rows(sub, kernels.SymmetryClass.O.value))
    return rows


def deltasym_suite(config: RunConfig) -> list[ResultRow]:
    """Bessel paths, tau, Petersson and the truncation of Delta-symbols."""
    rows = []
    for order in (0, 5, 11):
        xs = np.linspace(order + 10.0, order + 30.0, 41)
        series = bessel_j(order, xs, BesselMethod.SERIES)
        integral = bessel_j(order, xs, BesselMethod.INTEGRAL)
        dev = float(np.max(np.abs(series - integral)))
        rows.append(ResultRow.compare(f"deltasym.bessel.overlap{order}", dev, 0, 1e-9))
        wide = np.linspace(0.0, 200.0, 401)
        oracle = float(np.max(np.abs(bessel_j(order, wide) - special.jv(order, wide))))
        name = f"deltasym.bessel.oracle{order}"
        rows.append(ResultRow.compare(name, oracle, 0, 1e-10))

    order = 60
    squared = euler_product_power(order, 24)
    table = TauTable.build(order + 1)
    rows.append(
        ResultRow.check(
            "deltasym.tau.cross_check",
            all(table[n] == squared[n - 1] for n in range(1, order + 2)),
        )
    )

    for kappa in (10, 12):
        report = petersson_ratio_suite(kappa, 20, config.tol)
        rows.append(
            ResultRow(
                f"deltasym.petersson.k{kappa}",
                report.max_deviation,
                0.0,
                tolerance=1e-6,
                passed=report.passed,
            )
        )

    sound = 0.0
    tol = 1e-8
    for m, n in ((1, 1), (2, 3), (5, 7), (12, 12)):
        coarse = delta_symbol(DeltaParams(1, 12, tol), m, n)
        fine = delta_symbol(DeltaParams(1, 12, tol / 2), m, n)
        sound = max(sound, abs(coarse - fine))
    rows.append(ResultRow.compare("deltasym.truncation", sound, 0.0, 1.5 * tol))

    rng = _rng(config, 5)
    tf = TestFunction(Family.FEJER, 0.9)
    q, r = 11, 3
    system = chebyshev.HeckeSystem.random(arith.primes_up_to(200), rng, level=q)
    total = prime_sum_second_total(q, 12, r, tf, system)
    reindexed = prime_sum_second_reindexed(q, r, tf, system)
    rows.append(ResultRow.compare("deltasym.reindexing", total, reindexed, 1e-12))

    for kind in ("partition", "dyadic"):
        sub = replace(config, kind=kind)
        rows.extend(monitor_rows(sub))
    return rows


SUITES: dict[str, Callable[[RunConfig], list[ResultRow]]] = {
    "arith": arith_suite,
    "chebyshev": chebyshev_suite,
    "partitions": partitions_suite,
    "testfn": testfn_suite,
    "kernels": kernels_suite,
    "rmt": rmt_suite,
    "deltasym": deltasym_suite,
}


def run_suites(
    config: RunConfig, monitor: PerformanceMonitor | None = None
) -> list[ResultRow]:
    """Run the suite named by ``config.suite`` (or every suite for ``all``)."""
    names = list(SUITES) if config.suite == "all" else [config.suite]
    monitor = monitor or PerformanceMonitor()
    rows = []
    for name in names:
        with monitor.track(name):
            found = SUITES[name](config)
        failed = sum(1 for row in found if row.passed is False)
        logger.info("suite %s: %d rows, %d failed", name, len(found), failed)
        rows.extend(found)
    return rows
