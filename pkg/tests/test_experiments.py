"""Tests for the rows behind the command-line experiments."""

from dataclasses import replace

import pytest

from lowlying_lab.config import RunConfig
from lowlying_lab.experiments import (
    delta_rows,
    kloosterman_rows,
    make_test_function,
    monitor_rows,
    petersson_rows,
    predict_rows,
    prime_sum_rows,
    rmt_rows,
)
from lowlying_lab.testfn import Family


def _by_name(rows):
    return {row.name: row for row in rows}


def test_make_test_function():
    """Test the family and support come from the config."""
    tf = make_test_function(RunConfig(family="cosine_squared", nu=1.5))
    assert tf.family is Family.COSINE_SQUARED
    assert tf.nu == 1.5


def test_predict_rows_all():
    """Test every table is present with the Fejer closed forms."""
    rows = _by_name(predict_rows(RunConfig()))
    assert rows["predict.B.r2"].value == pytest.approx(0.75)
    assert rows["predict.B.r1"].value == pytest.approx(1.25)
    assert rows["predict.C.r2"].value == pytest.approx(11 / 48)
    assert rows["predict.C.r1"].value == pytest.approx(41 / 48)
    assert rows["predict.C.signed_plus"].value == pytest.approx(35 / 48)
    assert rows["predict.C.signed_minus"].value == pytest.approx(47 / 48)
    assert rows["predict.D.variance"].value == pytest.approx(1 / 12)
    assert rows["predict.F.m4.pairing"].value == pytest.approx(1 / 48)
    assert rows["predict.F.m4.literal"].value == pytest.approx(1 / 4)
    assert rows["predict.A.r1.same_type"].value == 1.0
    assert rows["predict.signs.k2.r1.eps+1"].value == -1.0
    assert rows["predict.bounds.r1.nu2max_unsigned"].value == 1.0
    assert all(row.passed is None for row in rows.values())


def test_predict_rows_single_theorem():
    """Test one table at a time."""
    rows = predict_rows(RunConfig(theorem="D"))
    assert [row.name for row in rows] == ["predict.D.variance"]


def test_kloosterman_rows_with_crt_split():
    """Test the identity rows pass and coprime splits are listed."""
    rows = kloosterman_rows(RunConfig(m=5, n=7, c=36))
    names = [row.name for row in rows]
    assert names[0] == "kloosterman.5.7.36"
    assert "kloosterman.5.7.36.crt.4x9" in names
    assert all(row.passed is not False for row in rows)


def test_kloosterman_rows_default():
    """Test S(4, 1; 9) has no coprime split."""
    rows = kloosterman_rows(RunConfig())
    assert not any(".crt." in row.name for row in rows)
    assert all(row.passed is not False for row in rows)


def test_petersson_rows():
    """Test a passing weight 10 check."""
    rows = petersson_rows(RunConfig(kappa=10, n_max=5))
    assert len(rows) == 1
    assert rows[0].name == "petersson.k10.n5.max_deviation"
    assert rows[0].passed is True


def test_delta_rows():
    """Test one row per pair of the grid."""
    rows = delta_rows(RunConfig(q=11, kappa=12, n_max=3))
    assert len(rows) == 9
    values = _by_name(rows)
    assert values["delta.q11.k12.1.2"].value == pytest.approx(
        values["delta.q11.k12.2.1"].value, abs=1e-9
    )


def test_prime_sum_rows():
    """Test the rows of an odd power at a small level."""
    rows = _by_name(prime_sum_rows(RunConfig(q=11, r=1)))
    prefix = "primesums.q11.k12.r1"
    assert f"{prefix}.first.harmonic_average" in rows
    assert f"{prefix}.second.m0.harmonic_average" in rows
    assert f"{prefix}.signed+1" in rows
    assert f"{prefix}.signed-1" in rows
    assert rows[f"{prefix}.covariance"].predicted == pytest.approx(1 / 12)
    assert rows[f"{prefix}.envelope.old_second"].value == pytest.approx(1 / 11)


def test_monitor_rows_exact_kinds():
    """Test the partition and dyadic rows pass."""
    for kind in ("partition", "dyadic"):
        rows = monitor_rows(RunConfig(kind=kind))
        assert rows
        assert all(row.passed for row in rows)


def test_monitor_rows_record_only():
    """Test picard and sieve rows carry no verdict."""
    picard = monitor_rows(RunConfig(kind="picard", x=3.0))
    assert "monitor.picard.k12.X3.ratio" in _by_name(picard)
    sieve = monitor_rows(RunConfig(kind="sieve", q=11))
    assert {row.name for row in sieve} >= {
        "monitor.sieve.q11.sign+1.lhs",
        "monitor.sieve.q11.sign-1.ratio",
    }
    assert all(row.passed is None for row in picard + sieve)


def test_rmt_rows_shapes():
    """Test row names and tolerances of a small Monte Carlo run."""
    config = RunConfig(group="sp", size=4, samples=200, seed=2)
    (d1,) = rmt_rows(config)
    assert d1.name == "rmt.sp.d1"
    assert d1.predicted == pytest.approx(0.75)
    assert d1.tolerance == pytest.approx(3 * d1.stderr + 0.01)
    (d2,) = rmt_rows(replace(config, stat="d2"), "o")
    assert d2.name == "rmt.o.d2"
    assert d2.predicted == pytest.approx(41 / 48)
    moments = _by_name(rmt_rows(replace(config, stat="moments")))
    assert set(moments) == {
        "rmt.sp.moments.m3",
        "rmt.sp.moments.m4.pairing",
        "rmt.sp.moments.m4.literal",
        "rmt.sp.moments.m4.literal_rejected",
        "rmt.sp.moments.m2",
        "rmt.sp.moments.m5",
        "rmt.sp.moments.m6",
    }
