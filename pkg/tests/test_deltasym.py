"""Tests for the Delta-symbol, Ramanujan tau and the Petersson checks."""

import numpy as np
import pytest

from lowlying_lab import deltasym
from lowlying_lab.deltasym import (
    DeltaParams,
    LevelOneHecke,
    TauTable,
    delta_grid,
    delta_symbol,
    euler_product_power,
    harmonic_weight_level_one,
    level_one_delta,
    level_one_hecke,
    petersson_ratio_suite,
    ramanujan_tau,
    tail_bound,
    tau_normalized,
    truncation_modulus,
)

TAU_1_TO_10 = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def test_delta_params_validation():
    """Test the level, weight and tolerance checks."""
    assert DeltaParams() == DeltaParams(1, 12, 1e-8)
    with pytest.raises(ValueError):
        DeltaParams(q=4)
    with pytest.raises(ValueError):
        DeltaParams(kappa=11)
    with pytest.raises(ValueError):
        DeltaParams(kappa=2)
    with pytest.raises(ValueError):
        DeltaParams(tol=0.0)


def test_truncation_modulus_is_minimal():
    """Test C = q k is the first multiple of q with certified tail below tol."""
    for dp, m, n in [
        (DeltaParams(1, 12, 1e-8), 1, 1),
        (DeltaParams(1, 12, 1e-8), 20, 20),
        (DeltaParams(11, 4, 1e-6), 3, 7),
    ]:
        c_max = truncation_modulus(dp, m, n)
        assert c_max % dp.q == 0
        k = c_max // dp.q
        assert tail_bound(dp, m, n, k) < dp.tol
        if k > 1:
            assert tail_bound(dp, m, n, k - 1) >= dp.tol


def test_tail_bound_decreases():
    """Test the certified tail shrinks as the cut grows."""
    dp = DeltaParams(1, 12)
    tails = [tail_bound(dp, 5, 3, k) for k in (1, 2, 10, 100)]
    assert all(a > b for a, b in zip(tails, tails[1:]))


def test_unreachable_tolerance():
    """Test the error names the achievable tolerance."""
    with pytest.raises(ValueError, match="achievable tolerance"):
        truncation_modulus(DeltaParams(1, 4, 1e-300), 1000, 1000)


def test_delta_grid_input_checks():
    """Test positivity and the m*n cap."""
    dp = DeltaParams(1, 12)
    assert delta_grid(dp, [], [1, 2]).shape == (0, 2)
    with pytest.raises(ValueError):
        delta_grid(dp, [0], [1])
    with pytest.raises(ValueError):
        delta_grid(dp, [2000], [1000])


def test_weight_ten_vanishes():
    """Test Delta_1(m, n) = 0 without cusp forms of weight 10."""
    grid = delta_grid(DeltaParams(1, 10), [1, 2, 3, 5], [1, 2, 4])
    np.testing.assert_allclose(grid, 0.0, atol=1e-6)
    assert level_one_delta(10, 3, 4) == 0.0


def test_weight_twelve_rank_one():
    """Test Delta_1(m, n) = omega lambda(m) lambda(n) at weight 12."""
    omega = harmonic_weight_level_one()
    assert 2.8 < omega < 2.9
    for m, n in [(1, 2), (2, 3), (4, 5), (3, 3)]:
        expected = omega * tau_normalized(m) * tau_normalized(n)
        assert delta_symbol(DeltaParams(1, 12), m, n) == pytest.approx(
            expected, abs=1e-7
        )
        assert level_one_delta(12, m, n) == pytest.approx(expected, abs=1e-12)


def test_delta_symmetry_at_prime_level():
    """Test Delta_q(m, n) = Delta_q(n, m) at a prime level."""
    grid = delta_grid(DeltaParams(11, 12), [1, 2, 3], [1, 2, 3])
    np.testing.assert_allclose(grid, grid.T, atol=1e-9)


def test_euler_product_power():
    """Test the pentagonal series and the weight 12 product."""
    assert euler_product_power(12, 1) == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]
    assert euler_product_power(9, 24) == TAU_1_TO_10
    assert euler_product_power(5, 0) == [1, 0, 0, 0, 0, 0]


def test_tau_table():
    """Test the first values and the tau(1), tau(2), tau(6) checks."""
    table = TauTable.build(60)
    assert [table[n] for n in range(1, 11)] == TAU_1_TO_10
    assert list(table.values[1:61]) == euler_product_power(59, 24)
    with pytest.raises(ValueError):
        table[61]
    with pytest.raises(ValueError):
        TauTable.build(0)
    with pytest.raises(ValueError):
        TauTable(2, (0, 1, 24))


def test_ramanujan_tau_properties():
    """Test multiplicativity, the Hecke relation and Deligne's bound."""
    assert ramanujan_tau(2) == -24
    assert ramanujan_tau(6) == ramanujan_tau(2) * ramanujan_tau(3)
    assert ramanujan_tau(4) == ramanujan_tau(2) ** 2 - 2**11
    for p in (2, 3, 5, 7, 9973):
        assert abs(ramanujan_tau(p)) <= 2 * p**5.5
    with pytest.raises(ValueError):
        ramanujan_tau(0)


def test_tau_normalized():
    """Test lambda(n) = tau(n) / n^(11/2) and its extension past the table."""
    for n in (2, 4, 12, 30, 9999):
        assert tau_normalized(n) == pytest.approx(ramanujan_tau(n) / n**5.5)
    assert tau_normalized(2 * 9973) == pytest.approx(
        tau_normalized(2) * tau_normalized(9973)
    )
    with pytest.raises(ValueError):
        tau_normalized(10007)


@pytest.mark.parametrize("kappa", [10, 12])
def test_petersson_ratio_suite(kappa):
    """Test the level one trace formula checks pass on a small grid."""
    report = petersson_ratio_suite(kappa, 8)
    assert report.passed
    assert report.kappa == kappa
    assert report.max_deviation < 1e-6


def test_petersson_ratio_suite_rejects_bad_input():
    """Test the weight and grid size limits."""
    with pytest.raises(ValueError):
        petersson_ratio_suite(14, 5)
    with pytest.raises(ValueError):
        petersson_ratio_suite(12, 31)


def test_moduli_blocks_do_not_change_the_grid(monkeypatch):
    """Test single-modulus blocks give the default blocked sum."""
    dp = DeltaParams(11, 12, 1e-10)
    grid = delta_grid(dp, [1, 2, 3, 50], [1, 7])
    monkeypatch.setattr(deltasym, "MODULUS_BLOCK", 1)
    np.testing.assert_allclose(
        delta_grid(dp, [1, 2, 3, 50], [1, 7]), grid, rtol=0, atol=1e-13
    )


@pytest.mark.parametrize(
    ("kappa", "p", "expected"),
    [
        (12, 5, [4830 / 5**5.5]),
        (16, 2, [216 / 2**7.5]),
        (16, 3, [-3348 / 3**7.5]),
        (
            24,
            2,
            [
                (540 - 12 * np.sqrt(144169)) / 2**11.5,
                (540 + 12 * np.sqrt(144169)) / 2**11.5,
            ],
        ),
    ],
)
def test_level_one_hecke_eigenvalues(kappa, p, expected):
    """Test T_p read off Delta_1 against known level-one eigenvalues."""
    hecke = LevelOneHecke.build(kappa, p)
    assert len(hecke.basis) == len(expected)
    assert hecke.basis[0] == 1
    assert all(b % p for b in hecke.basis)
    np.testing.assert_allclose(hecke.eigenvalues(), expected, rtol=0, atol=1e-6)


def test_level_one_hecke_multiplicativity():
    """Test rows . X_2(M) e_1 = Delta_1(m q^2, n) for n = 1 and n = q."""
    q = 11
    hecke = level_one_hecke(16, q)
    vectors = hecke.chebyshev_vectors()
    for _ in range(2):
        next(vectors)
    second = next(vectors)
    rows = hecke.rows([2, 3])
    dp = DeltaParams(1, 16)
    direct = delta_grid(dp, [2 * q * q, 3 * q * q], [1, q])
    np.testing.assert_allclose(rows @ second, direct[:, 0], rtol=0, atol=1e-7)
    twisted = rows @ (hecke.hecke @ second)
    np.testing.assert_allclose(twisted, direct[:, 1], rtol=0, atol=1e-7)


def test_level_one_hecke_rejects():
    """Test weights without cusp forms and composite p."""
    with pytest.raises(ValueError, match="no level-one cusp forms"):
        LevelOneHecke.build(10, 2)
    with pytest.raises(ValueError):
        LevelOneHecke.build(16, 4)
