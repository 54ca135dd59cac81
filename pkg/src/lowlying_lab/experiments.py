"""Result rows behind the predict, rmt-sim, petersson, kloosterman, delta,
prime-sums and monitor commands.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from . import kernels
from .arith import (
    factorize,
    kloosterman,
    kloosterman_complex,
    kloosterman_crt,
    weil_bound,
)
from .config import RunConfig
from .deltasym import DeltaParams, delta_grid, petersson_ratio_suite
from .primesums import (
    PrimeSumMode,
    covariance_prime_sum,
    prime_sum_envelopes,
    prime_sum_first,
    prime_sum_second,
    signed_expectation,
)
from .report import ResultRow
from .rmt import Statistic, monte_carlo
from .testfn import TestFunction
from .toolbox import (
    Direction,
    dyadic_envelope,
    dyadic_sum,
    partition_check,
    picard_sweep,
    sieve_form_monitor,
)

logger = logging.getLogger(__name__)

D1_ALLOWANCE = 0.01
D2_ALLOWANCE = 0.02
RELATIVE_TOL = 0.1
LITERAL_SEPARATION = 5.0
PICARD_SWEEP = (0.125, 0.25, 0.5, 1.0, 10.0, 100.0)
SIEVE_LENGTH = 10
MOMENT_NOTE = (
    "two readings of the even moments: pairing sigma^m (m-1)!! and literal "
    "sigma^2 (m-1)!!; rmt-sim --stat moments compares them"
)


def make_test_function(config: RunConfig) -> TestFunction:
    """Test function named by ``config.family`` and ``config.nu``."""
    return TestFunction(config.family, config.nu)


def _theorem_a(config: RunConfig) -> list[ResultRow]:
    rows = []
    for r in range(1, 9):
        cls = kernels.symmetry_type(r)
        rows.append(ResultRow(f"predict.A.r{r}.{cls.value}", 1.0))
        if r % 2:
            same = kernels.same_symmetry_type(r, config.kappa)
            rows.append(ResultRow(f"predict.A.r{r}.same_type", float(same)))
    return rows


def _theorem_b(config: RunConfig) -> list[ResultRow]:
    tf = make_test_function(config)
    return [
        ResultRow(f"predict.B.r{r}", kernels.predicted_one_level(r, tf))
        for r in range(1, 5)
    ]


def _theorem_c(config: RunConfig) -> list[ResultRow]:
    tf = make_test_function(config)
    rows = [
        ResultRow(f"predict.C.r{r}", kernels.predicted_two_level(r, tf, tf))
        for r in (1, 2)
    ]
    for sign, label in ((1, "plus"), (-1, "minus")):
        value = kernels.predicted_two_level(1, tf, tf, signed=sign)
        rows.append(ResultRow(f"predict.C.signed_{label}", value))
    return rows


def _theorem_d(config: RunConfig) -> list[ResultRow]:
    tf = make_test_function(config)
    return [ResultRow("predict.D.variance", kernels.predicted_variance(tf))]


def _theorem_f(config: RunConfig) -> list[ResultRow]:
    tf = make_test_function(config)
    rows = []
    for reading in kernels.MomentReading:
        value = kernels.predicted_moment(config.m, tf, reading)
        rows.append(ResultRow(f"predict.F.m{config.m}.{reading.value}", value))
    return rows


def _sign_table(config: RunConfig) -> list[ResultRow]:
    rows = []
    for kappa in (12, 14):
        for r in range(1, 9):
            for eps in (1, -1):
                sd = kernels.SignData(kappa, r, eps)
                value = kernels.sign_functional_equation(sd)
                name = f"predict.signs.k{kappa % 4}.r{r}.eps{eps:+d}"
                rows.append(ResultRow(name, float(value)))
    return rows


def _support_table(config: RunConfig) -> list[ResultRow]:
    rows = []
    for r in range(1, 7):
        params = kernels.SupportBoundParams(r, config.kappa, config.theta)
        bounds = kernels.support_bounds(params)
        for key in (
            "nu1max",
            "nu1max_signed",
            "nu2max_unsigned",
            "nu2max_signed_C",
            "nu2max_signed_thm",
            "nu_variance_signed",
        ):
            rows.append(ResultRow(f"predict.bounds.r{r}.{key}", getattr(bounds, key)))
        rows.append(
            ResultRow(
                f"predict.bounds.r{r}.moment{config.m}", bounds.moment_bound(config.m)
            )
        )
    return rows


PREDICTIONS = {
    "A": _theorem_a,
    "B": _theorem_b,
    "C": _theorem_c,
    "D": _theorem_d,
    "F": _theorem_f,
    "signs": _sign_table,
    "bounds": _support_table,
}


def predict_rows(config: RunConfig) -> list[ResultRow]:
    """Prediction tables for ``config.theorem``; rows carry no verdict."""
    names = list(PREDICTIONS) if config.theorem == "all" else [config.theorem]
    rows = []
    for name in names:
        rows.extend(PREDICTIONS[name](config))
    return rows


def _d1_prediction(cls: kernels.SymmetryClass, tf: TestFunction) -> float:
    return kernels.plancherel_integral(cls, tf).fourier


def _d2_prediction(cls: kernels.SymmetryClass, tf: TestFunction) -> float:
    r, sign = kernels.two_level_reading(cls)
    return kernels.predicted_two_level(r, tf, tf, signed=sign)


def rmt_rows(config: RunConfig, group: str | None = None) -> list[ResultRow]:
    """Monte Carlo statistics of one group against their predictions."""
    cls = kernels.SymmetryClass(group or config.group)
    tf = make_test_function(config)
    stat = config.stat
    wanted = Statistic.D2 if stat == "d2" else Statistic.D1
    reports = monte_carlo(
        cls,
        config.size,
        config.samples,
        tf,
        statistics=(wanted,),
        seed=config.seed,
        workers=config.workers,
    )
    mc = reports[wanted.value]
    prefix = f"rmt.{cls.value}.{stat}"
    if stat == "d1":
        se = mc.stderr["mean"]
        predicted = _d1_prediction(cls, tf)
        return [
            ResultRow.compare(prefix, mc.mean, predicted, 3 * se + D1_ALLOWANCE, se)
        ]
    if stat == "d2":
        se = mc.stderr["mean"]
        predicted = _d2_prediction(cls, tf)
        return [
            ResultRow.compare(prefix, mc.mean, predicted, 3 * se + D2_ALLOWANCE, se)
        ]
    sigma2 = kernels.predicted_variance(tf)
    if stat == "variance":
        se = mc.stderr["variance"]
        return [
            ResultRow.compare(prefix, mc.variance, sigma2, RELATIVE_TOL * sigma2, se)
        ]
    return _moment_rows(prefix, mc, tf)


def _moment_rows(prefix: str, mc, tf: TestFunction) -> list[ResultRow]:
    rows = []
    se3 = mc.stderr["moment3"]
    rows.append(ResultRow.compare(f"{prefix}.m3", mc.moments[3], 0.0, 3 * se3, se3))
    se4 = mc.stderr["moment4"]
    pairing = kernels.predicted_moment(4, tf, kernels.MomentReading.PAIRING)
    literal = kernels.predicted_moment(4, tf, kernels.MomentReading.LITERAL)
    rows.append(
        ResultRow.compare(
            f"{prefix}.m4.pairing", mc.moments[4], pairing, RELATIVE_TOL * pairing, se4
        )
    )
    rows.append(ResultRow(f"{prefix}.m4.literal", mc.moments[4], literal, se4))
    # Distance from the literal reading, in standard errors.
    gap = abs(mc.moments[4] - literal) / se4 if se4 > 0 else math.inf
    rows.append(
        ResultRow.check(
            f"{prefix}.m4.literal_rejected", gap >= LITERAL_SEPARATION, gap
        )
    )
    for k in (2, 5, 6):
        predicted = kernels.predicted_moment(k, tf)
        se = mc.stderr[f"moment{k}"]
        rows.append(ResultRow(f"{prefix}.m{k}", mc.moments[k], predicted, se))
    return rows


def petersson_rows(config: RunConfig) -> list[ResultRow]:
    """Petersson check at weight ``config.kappa`` on an ``n_max`` grid."""
    report = petersson_ratio_suite(config.kappa, config.n_max, config.tol)
    name = f"petersson.k{config.kappa}.n{config.n_max}"
    rows = [
        ResultRow(
            f"{name}.max_deviation",
            report.max_deviation,
            0.0,
            tolerance=1e-6,
            passed=report.passed,
        )
    ]
    rows.extend(
        ResultRow.check(f"{name}.pair.{m}.{n}", False) for m, n in report.failures
    )
    return rows


def kloosterman_rows(config: RunConfig) -> list[ResultRow]:
    """S(m, n; c) with its Weil bound, symmetry, realness and CRT checks."""
    m, n, c = config.m, config.n, config.c
    value = kloosterman(m, n, c)
    name = f"kloosterman.{m}.{n}.{c}"
    rows = [
        ResultRow(name, value),
        ResultRow.check(f"{name}.weil", abs(value) <= weil_bound(m, n, c) + 1e-9),
        ResultRow.compare(f"{name}.symmetric", kloosterman(n, m, c), value, 1e-9),
        ResultRow.compare(
            f"{name}.imaginary", kloosterman_complex(m, n, c).imag, 0.0, 1e-10 * c
        ),
    ]
    for a in factorize(c).divisors():
        b = c // a
        if 1 < a < b and math.gcd(a, b) == 1:
            crt = kloosterman_crt(m, n, a, b)
            rows.append(ResultRow.compare(f"{name}.crt.{a}x{b}", crt, value, 1e-8))
    return rows


def delta_rows(config: RunConfig) -> list[ResultRow]:
    """Delta_q(m, n) for 1 <= m, n <= ``config.n_max``."""
    dp = DeltaParams(config.q, config.kappa, config.tol)
    idx = np.arange(1, config.n_max + 1)
    grid = delta_grid(dp, idx, idx)
    return [
        ResultRow(f"delta.q{dp.q}.k{dp.kappa}.{m}.{n}", float(grid[i, j]))
        for i, m in enumerate(idx)
        for j, n in enumerate(idx)
    ]


def prime_sum_rows(config: RunConfig) -> list[ResultRow]:
    """Averaged prime sums, their envelopes and the covariance prediction."""
    q, kappa, r = config.q, config.kappa, config.r
    tf = make_test_function(config)
    mode = PrimeSumMode(config.mode)
    name = f"primesums.q{q}.k{kappa}.r{r}"
    rows = [
        ResultRow(
            f"{name}.first.{mode.value}",
            prime_sum_first(q, kappa, r, tf, mode, config.tol),
        )
    ]
    if mode is not PrimeSumMode.SIGNED_TWIST:
        for m in range(r):
            value = prime_sum_second(q, kappa, r, m, tf, mode, config.tol)
            rows.append(ResultRow(f"{name}.second.m{m}.{mode.value}", value))
    if r % 2:
        for eps in (1, -1):
            value = signed_expectation(q, kappa, r, tf, eps, config.tol)
            rows.append(ResultRow(f"{name}.signed{eps:+d}", value))
    env = prime_sum_envelopes(q, kappa, r, config.nu, config.theta)
    for key in ("new_first", "old_first", "signed_old_first", "old_second"):
        rows.append(ResultRow(f"{name}.envelope.{key}", getattr(env, key)))
    rows.append(
        ResultRow(
            f"{name}.covariance",
            covariance_prime_sum(q, r, tf, tf),
            kernels.predicted_covariance(tf, tf),
        )
    )
    return rows


def monitor_rows(config: RunConfig) -> list[ResultRow]:
    """Monitored bounds; ratios are recorded, only exact identities get a verdict."""
    kind = config.kind
    if kind == "picard":
        rows = []
        for rec in picard_sweep(PICARD_SWEEP + (config.x,), config.kappa):
            name = f"monitor.picard.k{rec.kappa}.X{rec.X:g}"
            rows.append(ResultRow(f"{name}.lhs", rec.lhs, stderr=rec.tail_bound))
            rows.append(ResultRow(f"{name}.ratio", rec.ratio))
        return rows
    if kind == "sieve":
        rng = np.random.default_rng(config.seed)
        a = rng.standard_normal(SIEVE_LENGTH)
        b = rng.standard_normal(SIEVE_LENGTH)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        tf = make_test_function(config)
        rows = []
        for sign in (1, -1):
            rec = sieve_form_monitor(
                config.q, 1, 1, a, b, tf, config.theta, sign, config.kappa, config.tol
            )
            name = f"monitor.sieve.q{config.q}.sign{sign:+d}"
            rows.append(ResultRow(f"{name}.lhs", rec.lhs, rec.rhs_envelope))
            rows.append(ResultRow(f"{name}.ratio", rec.ratio))
        return rows
    if kind == "partition":
        grid = np.geomspace(1e-3, 1e3, 200)
        deviation = partition_check(grid)
        return [ResultRow.compare("monitor.partition.sum", deviation, 0.0, 1e-12)]
    rows = []
    for alpha, bound, direction in (
        (2.0, 8.0, Direction.UP_TO),
        (1.0, 4.0, Direction.FROM),
        (0.5, 1.0, Direction.UP_TO),
    ):
        value = dyadic_sum(alpha, bound, direction)
        envelope = dyadic_envelope(alpha, bound, direction)
        name = f"monitor.dyadic.{direction.value}.a{alpha:g}.M{bound:g}"
        rows.append(ResultRow.check(name, value <= envelope * (1 + 1e-12), value))
    return rows
