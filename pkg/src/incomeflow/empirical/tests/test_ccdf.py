"""Tests for the Weibull CCDF and its plot table."""

import math

import numpy as np
import pytest

from incomeflow.empirical import (
    IncomeSample,
    build_ccdf,
    loglog_points,
    max_deviation,
)
from incomeflow.errors import ConfigurationError, EmptySampleError
from incomeflow.model import sample


def curve_of(*incomes):
    return build_ccdf(IncomeSample.from_incomes(incomes))


class TestBuildCcdf:
    """Tests for build_ccdf."""

    def test_three_records(self):
        """Test [10, 20, 30] -> (30, 1/4), (20, 2/4), (10, 3/4)."""
        c = curve_of(10.0, 20.0, 30.0)
        assert c.points == [(30.0, 0.25), (20.0, 0.5), (10.0, 0.75)]
        assert c.n == 3

    def test_single_record(self):
        """Test that one record gets exceedance 1/2."""
        assert curve_of(42.0).points == [(42.0, 0.5)]

    def test_empty_sample_rejected(self):
        """Test that an empty sample raises EmptySampleError."""
        with pytest.raises(EmptySampleError):
            build_ccdf(IncomeSample.from_incomes([]))

    def test_ties_keep_distinct_ranks(self):
        """Test that tied incomes get consecutive ratios, none averaged."""
        c = curve_of(5.0, 7.0, 5.0, 5.0)
        np.testing.assert_array_equal(c.incomes, [7.0, 5.0, 5.0, 5.0])
        np.testing.assert_array_equal(c.exceedances, np.arange(1, 5) / 5.0)

    def test_full_record_count_kept(self):
        """Test that the curve is as long as the sample."""
        s = IncomeSample.from_incomes(np.random.default_rng(0).lognormal(10, 1, 1_234))
        assert len(build_ccdf(s)) == 1_234

    def test_extreme_ranks(self):
        """Test 1/(n+1) at the maximum and n/(n+1) at the minimum."""
        incomes = np.random.default_rng(1).pareto(2.0, 999) + 1.0
        c = build_ccdf(IncomeSample.from_incomes(incomes))
        assert c.incomes[0] == incomes.max()
        assert c.exceedances[0] == pytest.approx(1 / 1000)
        assert c.incomes[-1] == incomes.min()
        assert c.exceedances[-1] == pytest.approx(999 / 1000)

    def test_permutation_invariance(self):
        """Test that the order of tie-free input does not matter."""
        rng = np.random.default_rng(2)
        incomes = rng.exponential(30_000.0, 500)
        first = build_ccdf(IncomeSample.from_incomes(incomes))
        second = build_ccdf(IncomeSample.from_incomes(rng.permutation(incomes)))
        np.testing.assert_array_equal(first.incomes, second.incomes)
        np.testing.assert_array_equal(first.exceedances, second.exceedances)

    def test_new_maximum_shifts_every_rank(self):
        """Test that a new richest record moves l/(n+1) to (l+1)/(n+2)."""
        incomes = np.random.default_rng(3).exponential(1.0, 50)
        before = build_ccdf(IncomeSample.from_incomes(incomes))
        after = build_ccdf(
            IncomeSample.from_incomes(np.append(incomes, 10 * incomes.max()))
        )
        np.testing.assert_array_equal(after.incomes[1:], before.incomes)
        np.testing.assert_allclose(
            after.exceedances[1:], (np.arange(1, 51) + 1) / 52.0, rtol=1e-15
        )

    def test_dkw_scale_agreement_with_model(self, mds_2008):
        """Test max |empirical - ccdf_eq| < 0.01 for 1e5 draws."""
        c = build_ccdf(sample(mds_2008, 100_000, seed=2008))
        assert max_deviation(c, mds_2008) < 0.01


class TestLoglogPoints:
    """Tests for loglog_points."""

    def test_no_decimation_is_identity(self):
        """Test that decimation 1 only takes logarithms."""
        c = curve_of(*np.linspace(1.0, 300.0, 300))
        table = loglog_points(c, 1)
        np.testing.assert_allclose(table["log10_income"], np.log10(c.incomes))
        np.testing.assert_allclose(table["log10_exceedance"], np.log10(c.exceedances))

    def test_point_count(self):
        """Test ceil((n-100)/d) + 100 points for n = 1e5."""
        n, d = 100_000, 7
        c = build_ccdf(IncomeSample.from_incomes(np.arange(1.0, n + 1.0)))
        table = loglog_points(c, d)
        assert len(table) == math.ceil((n - 100) / d) + 100

    def test_small_curve_keeps_everything(self):
        """Test that n <= 100 points are never decimated."""
        c = curve_of(*np.arange(1.0, 61.0))
        assert len(loglog_points(c, 10)) == 60

    def test_monotone_after_decimation(self):
        """Test that decimation keeps the rank order."""
        c = build_ccdf(IncomeSample.from_incomes(np.geomspace(1.0, 1e6, 5_000)))
        table = loglog_points(c, 13)
        assert np.all(np.diff(table["log10_income"]) < 0)
        assert np.all(np.diff(table["log10_exceedance"]) > 0)

    def test_rejects_zero_decimation(self):
        """Test that decimation must be at least 1."""
        with pytest.raises(ConfigurationError):
            loglog_points(curve_of(1.0, 2.0), 0)
