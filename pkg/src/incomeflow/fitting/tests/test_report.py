"""Tests for reference curves and fit summaries."""

import numpy as np
import pytest

from incomeflow.errors import ParameterError
from incomeflow.fitting import (
    FitReport,
    format_parameter_table,
    grid_curve,
    noise_free_curve,
    overlay_frame,
    published_comparison,
)
from incomeflow.model import ccdf_eq


def report_for(params, year=2008, dataset="matched") -> FitReport:
    return FitReport(
        params=params,
        residual_rms=0.01,
        n_points_used=100,
        converged=True,
        year=year,
        dataset=dataset,
    )


class TestNoiseFreeCurve:
    """Tests for noise_free_curve."""

    def test_model_exceedance_at_each_rank(self, mds_2008):
        """Test that rank l sits where the model exceedance is l/(n+1)."""
        curve = noise_free_curve(mds_2008, 500)
        assert len(curve) == 500 and curve.n == 500
        np.testing.assert_allclose(
            ccdf_eq(curve.incomes, mds_2008), curve.exceedances, rtol=1e-7
        )

    def test_rejects_empty_curve(self, mds_2008):
        """Test that n < 1 raises ParameterError."""
        with pytest.raises(ParameterError):
            noise_free_curve(mds_2008, 0)


class TestGridCurve:
    """Tests for grid_curve."""

    def test_orders_and_deduplicates(self, mds_2008):
        """Test that any grid order gives a descending curve."""
        curve = grid_curve(mds_2008, [1e4, 1e6, 1e5, 1e4])
        np.testing.assert_array_equal(curve.incomes, [1e6, 1e5, 1e4])

    def test_rejects_non_positive_incomes(self, mds_2008):
        """Test that zero incomes raise ParameterError."""
        with pytest.raises(ParameterError):
            grid_curve(mds_2008, [0.0, 1e4])


class TestTables:
    """Tests for the tabular summaries."""

    def test_parameter_table_layout(self, mds_2008, mds_2009):
        """Test one row per report under the published column names."""
        text = format_parameter_table(
            [report_for(mds_2008), report_for(mds_2009, year=2009)]
        )
        lines = text.splitlines()
        assert lines[0].split() == [
            "Year", "T", "T1", "m0", "m1", "alpha", "alpha1", "residual"
        ]
        assert len(lines) == 3
        assert "2.965" in lines[1] and "0.890" in lines[1]
        assert "450,000" in lines[1]

    def test_published_comparison_of_exact_fit(self, mds_2008):
        """Test zero differences when the fit equals the published row."""
        frame = published_comparison([report_for(mds_2008)])
        assert len(frame) == 6
        np.testing.assert_allclose(frame["relative_difference"], 0.0, atol=1e-12)

    def test_comparison_skips_unknown_rows(self, mds_2008):
        """Test that reports without a published counterpart are left out."""
        frame = published_comparison(
            [report_for(mds_2008, year=None), report_for(mds_2008, year=1999)]
        )
        assert frame.empty

    def test_overlay_frame(self, mds_2008):
        """Test the columns of the overlay table."""
        curve = noise_free_curve(mds_2008, 100)
        frame = overlay_frame(curve, mds_2008)
        assert list(frame.columns) == ["income", "empirical", "model"]
        np.testing.assert_allclose(frame["model"], frame["empirical"], rtol=1e-7)
