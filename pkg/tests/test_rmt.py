"""Tests for Haar sampling and the Monte Carlo zero statistics."""

import numpy as np
import pytest

from lowlying_lab.kernels import SymmetryClass, predicted_two_level, two_level_reading
from lowlying_lab.rmt import (
    MonteCarloReport,
    Statistic,
    TwoLevelMethod,
    ZeroSample,
    eigenphases_to_zeros,
    monte_carlo,
    one_level_stat,
    sample_matrix,
    split_counts,
    symplectic_form,
    two_level_stat,
)
from lowlying_lab.testfn import Family, TestFunction


def test_special_orthogonal_samples(rng):
    """Test SO(2N) and SO(2N+1) draws are orthogonal with determinant 1."""
    for cls, size in [("soeven", 8), ("soodd", 9)]:
        u = sample_matrix(cls, 4, rng)
        assert u.shape == (size, size)
        np.testing.assert_allclose(u.T @ u, np.eye(size), atol=1e-12)
        assert np.linalg.det(u) == pytest.approx(1.0)


def test_symplectic_samples(rng):
    """Test USp(2N) draws are unitary and preserve J."""
    u = sample_matrix(SymmetryClass.SP, 5, rng)
    j = symplectic_form(5)
    assert u.shape == (10, 10)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(10), atol=1e-10)
    np.testing.assert_allclose(u.T @ j @ u, j, atol=1e-10)


def test_orthogonal_mixture_draws_both_parities(rng):
    """Test the O class mixes even and odd sizes."""
    sizes = {sample_matrix("o", 3, rng).shape[0] for _ in range(40)}
    assert sizes == {6, 7}


def test_sample_matrix_rejects_small_rank(rng):
    """Test N >= 2."""
    with pytest.raises(ValueError):
        sample_matrix("sp", 1, rng)


@pytest.mark.parametrize("cls", ["soeven", "soodd", "sp", "o"])
def test_zeros_are_symmetric(cls, rng):
    """Test the scaled zeros pair under negation with signed indices."""
    zs = eigenphases_to_zeros(sample_matrix(cls, 6, rng), cls)
    np.testing.assert_array_equal(zs.zeros, -zs.zeros[::-1])
    assert np.all(np.diff(zs.zeros) >= 0)
    assert np.all(np.abs(zs.zeros) <= zs.dim / 2)
    np.testing.assert_array_equal(zs.index, -zs.index[::-1])
    assert zs.has_trivial_zero == (zs.dim % 2 == 1)
    if zs.has_trivial_zero:
        assert zs.zeros[zs.dim // 2] == 0.0
        assert zs.cls is SymmetryClass.SO_ODD


def test_eigenphases_to_zeros_errors(rng):
    """Test the size/class check and the pairing check."""
    with pytest.raises(ValueError):
        eigenphases_to_zeros(sample_matrix("soeven", 2, rng), "soodd")
    unpaired = np.diag(np.exp(1j * np.array([0.1, 0.5])))
    with pytest.raises(RuntimeError):
        eigenphases_to_zeros(unpaired, "soeven")


def test_two_level_identity_on_samples(rng):
    """Test direct summation equals the square-minus-diagonal identity."""
    tf1 = TestFunction(Family.FEJER, 0.5)
    tf2 = TestFunction(Family.COSINE_SQUARED, 0.8)
    for cls in ("soeven", "soodd", "sp"):
        for _ in range(5):
            zs = eigenphases_to_zeros(sample_matrix(cls, 5, rng), cls)
            direct = two_level_stat(zs, tf1, tf2, TwoLevelMethod.DIRECT)
            via = two_level_stat(zs, tf1, tf2, "via_identity")
            assert direct == pytest.approx(via, abs=1e-9)


def test_two_level_excludes_partner_zeros(fejer_half):
    """Test a single pair {-a, a} contributes nothing to D_2."""
    zs = ZeroSample(
        SymmetryClass.SO_EVEN, 2, np.array([-0.3, 0.3]), np.array([-1, 1])
    )
    assert two_level_stat(zs, fejer_half, fejer_half) == 0.0
    assert two_level_stat(
        zs, fejer_half, fejer_half, TwoLevelMethod.VIA_IDENTITY
    ) == pytest.approx(0.0, abs=1e-15)


def test_two_level_with_trivial_zero(fejer_half):
    """Test the trivial zero pairs with both members of {-a, a}."""
    a = 0.3
    zs = ZeroSample(
        SymmetryClass.SO_ODD, 3, np.array([-a, 0.0, a]), np.array([-1, 0, 1])
    )
    expected = 4 * fejer_half.phi(a) * fejer_half.phi(0.0)
    assert two_level_stat(zs, fejer_half, fejer_half) == pytest.approx(expected)
    assert two_level_stat(zs, fejer_half, fejer_half, "via_identity") == (
        pytest.approx(expected)
    )
    assert one_level_stat(zs, fejer_half) == pytest.approx(
        2 * fejer_half.phi(a) + 0.5
    )


def test_monte_carlo_report_from_values():
    """Test mean, unbiased variance and centered moments."""
    report = MonteCarloReport.from_values("d1", np.array([1.0, 2.0, 3.0, 4.0]))
    assert report.samples == 4
    assert report.mean == 2.5
    assert report.variance == pytest.approx(5 / 3)
    assert report.moments[2] == pytest.approx(1.25)
    assert report.moments[3] == pytest.approx(0.0)
    assert set(report.moments) == {2, 3, 4, 5, 6}
    assert report.stderr["mean"] == pytest.approx(np.sqrt(5 / 3) / 2)
    assert {"mean", "variance", "moment2", "moment6"} <= set(report.stderr)


def test_split_counts():
    """Test samples are shared deterministically across workers."""
    assert split_counts(10, 3) == [4, 3, 3]
    assert split_counts(100, 1) == [100]
    assert sum(split_counts(1001, 7)) == 1001


def test_monte_carlo_is_reproducible(fejer_half):
    """Test equal seeds give equal results and distinct seeds differ."""
    def run(seed):
        return monte_carlo("soeven", 4, 100, fejer_half, seed=seed)

    first, second, other = run(7), run(7), run(8)
    assert first["d1"] == second["d1"]
    assert first["d1"].mean != other["d1"].mean


def test_monte_carlo_with_workers(fejer_half):
    """Test the worker pool depends only on (seed, workers)."""
    kwargs = dict(statistics=("d1", "d2"), seed=11, workers=2)
    first = monte_carlo("soodd", 3, 100, fejer_half, **kwargs)
    second = monte_carlo("soodd", 3, 100, fejer_half, **kwargs)
    assert set(first) == {"d1", "d2"}
    assert first["d1"].samples == 100
    assert first["d2"].mean == second["d2"].mean


def test_monte_carlo_rejects_few_samples(fejer_half):
    """Test at least 100 samples are required."""
    with pytest.raises(ValueError):
        monte_carlo("sp", 4, 99, fejer_half)
    with pytest.raises(ValueError):
        monte_carlo("sp", 4, 100, fejer_half, workers=0)


def test_symplectic_one_level_mean(fejer_half):
    """Test the empirical one-level density approaches the Sp prediction."""
    report = monte_carlo("sp", 10, 400, fejer_half, (Statistic.D1,), seed=1)["d1"]
    assert abs(report.mean - 0.75) < 5 * report.stderr["mean"] + 0.05


@pytest.mark.parametrize("cls", [SymmetryClass.SP, SymmetryClass.SO_EVEN])
def test_two_level_mean(cls, fejer_half):
    """Test the empirical two-level density against its class prediction."""
    r, sign = two_level_reading(cls)
    predicted = predicted_two_level(r, fejer_half, fejer_half, signed=sign)
    report = monte_carlo(cls, 30, 1000, fejer_half, ("d2",), seed=5)["d2"]
    assert abs(report.mean - predicted) < 3 * report.stderr["mean"] + 0.02


def test_orthogonal_variance_and_moments(fejer_half):
    """Test the O variance, odd and fourth moments at small N.

    The fourth moment sits near 3 sigma^4 = 1/48 and far from 3 sigma^2 = 1/4.
    """
    report = monte_carlo("o", 30, 2000, fejer_half, ("d1",), seed=3)["d1"]
    se = report.stderr
    assert abs(report.variance - 1 / 12) < 3 * se["variance"] + 0.01
    assert abs(report.moments[3]) < 4 * se["moment3"] + 0.002
    assert abs(report.moments[4] - 1 / 48) < 4 * se["moment4"] + 0.003
    assert abs(report.moments[4] - 1 / 4) > 10 * se["moment4"]
