"""Tests for the closed-form density, its normalisation and the CCDF."""

import math

import numpy as np
import pytest

from incomeflow.errors import ParameterError
from incomeflow.model import (
    PUBLISHED_ROWS,
    Dataset,
    EyShape,
    ccdf_eq,
    cdf_eq,
    isf,
    mean_income,
    normalize,
    pdf_eq,
    published,
)
from incomeflow.model.quadrature import integrate


def total_mass(p) -> float:
    return integrate(
        lambda m: float(pdf_eq(m, p)),
        0.0,
        math.inf,
        ref=min(p.T, p.m0) / 100.0,
        breaks=(p.m0, p.m1),
        cap=1e4 * p.m1,
    )


class TestPdf:
    """Tests for pdf_eq."""

    def test_zero_income_gives_c_prime(self, mds_2008):
        """Test that pdf_eq(0) = c'."""
        assert pdf_eq(0.0, mds_2008) == pytest.approx(mds_2008.c_prime, rel=1e-14)

    def test_continuous_at_m1(self, mds_2008):
        """Test continuity of the two branches at m1."""
        below = pdf_eq(np.nextafter(mds_2008.m1, 0.0), mds_2008)
        at = pdf_eq(mds_2008.m1, mds_2008)
        assert abs(below - at) / at < 1e-12

    @pytest.mark.parametrize(
        "row", PUBLISHED_ROWS, ids=lambda r: f"{r.dataset.value}-{r.year}"
    )
    def test_every_published_row_is_continuous(self, row):
        """Test continuity at m1 for every published row."""
        p = normalize(row.params)
        below = pdf_eq(np.nextafter(p.m1, 0.0), p)
        at = pdf_eq(p.m1, p)
        assert abs(below - at) / at < 1e-12

    def test_strictly_positive(self, mds_2008):
        """Test that the density is positive over many decades."""
        values = pdf_eq(np.geomspace(1e-3, 1e12, 500), mds_2008)
        assert np.all(values > 0)

    def test_array_and_scalar_inputs(self, mds_2008):
        """Test that scalars give floats and arrays keep their shape."""
        assert isinstance(pdf_eq(1e5, mds_2008), float)
        grid = np.full((2, 3), 1e5)
        assert pdf_eq(grid, mds_2008).shape == (2, 3)

    def test_rejects_negative_income(self, mds_2008):
        """Test that negative incomes raise ParameterError."""
        with pytest.raises(ParameterError):
            pdf_eq(-1.0, mds_2008)
        with pytest.raises(ParameterError):
            ccdf_eq([1.0, -1.0], mds_2008)


class TestNormalize:
    """Tests for normalize."""

    @pytest.mark.parametrize(
        "row", PUBLISHED_ROWS, ids=lambda r: f"{r.dataset.value}-{r.year}"
    )
    def test_every_published_row_integrates_to_one(self, row):
        """Test unit mass for every published row."""
        p = normalize(row.params)
        assert total_mass(p) == pytest.approx(1.0, abs=1e-8)

    def test_c_double_prime_follows_from_continuity(self, mds_2008):
        """Test the relation between the two constants."""
        p = mds_2008
        x1 = p.m1 / p.m0
        log_ratio = (
            -(p.m0 / p.T) * math.atan(x1)
            - 0.5 * (p.alpha + 1) * math.log1p(x1 * x1)
            + (p.m0 / p.T1) * math.atan(x1)
            + 0.5 * (p.alpha1 + 1) * math.log1p(x1 * x1)
        )
        assert p.c_double_prime / p.c_prime == pytest.approx(
            math.exp(log_ratio), rel=1e-12
        )

    def test_scaling_rescales_c_prime(self, mds_2008):
        """Test that scaling incomes by s scales c' by 1/s."""
        scaled = normalize(mds_2008.shape().scaled(10.0))
        assert scaled.c_prime == pytest.approx(mds_2008.c_prime / 10.0, rel=1e-10)
        assert scaled.c_double_prime == pytest.approx(
            mds_2008.c_double_prime / 10.0, rel=1e-10
        )

    def test_2009_row_normalises(self):
        """Test that the alpha ~ alpha1 row of 2009 normalises."""
        p = normalize(
            EyShape(
                T=37_000, T1=290_000, m0=145_000, m1=290_000, alpha=2.974, alpha1=2.608
            )
        )
        assert p.c_prime > 0

    def test_unrepresentable_high_branch_constant_raises(self):
        """Test that T1 far below m0 raises ParameterError instead of overflowing."""
        shape = EyShape(
            T=38_000, T1=100, m0=120_000, m1=320_000, alpha=3.06, alpha1=2.13
        )
        with pytest.raises(ParameterError):
            normalize(shape)

    def test_rejects_divergent_tail(self):
        """Test that alpha1 <= 0 raises ParameterError."""
        shape = EyShape.model_construct(
            T=1.0, T1=1.0, m0=1.0, m1=2.0, alpha=3.0, alpha1=-0.5
        )
        with pytest.raises(ParameterError):
            normalize(shape)


class TestCcdf:
    """Tests for ccdf_eq, cdf_eq and isf."""

    def test_zero_income_gives_one(self, mds_2008):
        """Test that ccdf_eq(0) = 1."""
        assert ccdf_eq(0.0, mds_2008) == 1.0

    def test_monotone_and_bounded(self, mds_2008):
        """Test that the CCDF is non-increasing inside [0, 1]."""
        grid = np.concatenate([[0.0], np.geomspace(1e-3, 1e13, 4000)])
        values = ccdf_eq(grid, mds_2008)
        assert np.all(values >= 0) and np.all(values <= 1)
        assert np.all(np.diff(values) <= 1e-15)

    def test_tail_slope_tends_to_minus_alpha1(self, mds_2008):
        """Test the log-log slope between 1e8 and 1e9."""
        slope = math.log(ccdf_eq(1e9, mds_2008) / ccdf_eq(1e8, mds_2008)) / math.log(10)
        assert slope == pytest.approx(-0.890, abs=0.02)

    def test_difference_matches_quadrature(self, mds_2008):
        """Test ccdf(1e4) - ccdf(1e6) against quadrature of the density."""
        direct = integrate(
            lambda m: float(pdf_eq(m, mds_2008)),
            1e4,
            1e6,
            ref=1e4,
            breaks=(mds_2008.m0, mds_2008.m1),
        )
        difference = ccdf_eq(1e4, mds_2008) - ccdf_eq(1e6, mds_2008)
        assert difference == pytest.approx(direct, abs=1e-8)

    def test_tail_beyond_cut_matches_quadrature(self, mds_2009):
        """Test the analytic tail against quadrature beyond the table."""
        m = 1e4 * mds_2009.m1 * 3.0
        density = pdf_eq(m, mds_2009)
        # in units of pdf(m) the integral is O(m), away from the absolute tolerance
        direct = integrate(
            lambda x: float(pdf_eq(x, mds_2009)) / density,
            m,
            math.inf,
            ref=m,
            cap=10 * m,
        )
        assert ccdf_eq(m, mds_2009) / density == pytest.approx(direct, rel=1e-4)

    def test_cdf_complements_ccdf(self, mds_2008):
        """Test that cdf + ccdf = 1."""
        grid = np.geomspace(1e3, 1e9, 50)
        np.testing.assert_allclose(
            cdf_eq(grid, mds_2008) + ccdf_eq(grid, mds_2008), 1.0, rtol=1e-14
        )

    @pytest.mark.parametrize("q", [0.999999, 0.9, 0.5, 1e-2, 1e-4, 1e-7, 1e-10])
    def test_isf_inverts_ccdf(self, mds_2008, q):
        """Test that ccdf_eq(isf(q)) = q."""
        m = isf(q, mds_2008)
        assert ccdf_eq(m, mds_2008) == pytest.approx(q, rel=1e-8)

    def test_isf_rejects_probabilities_outside_unit_interval(self, mds_2008):
        """Test that q must lie in (0, 1)."""
        with pytest.raises(ParameterError):
            isf(0.0, mds_2008)
        with pytest.raises(ParameterError):
            isf([0.5, 1.0], mds_2008)


class TestMeanIncome:
    """Tests for mean_income."""

    def test_infinite_mean_rejected(self, mds_2008):
        """Test that alpha1 < 1 has no finite mean."""
        with pytest.raises(ParameterError):
            mean_income(mds_2008)

    def test_truncated_mean_is_finite(self, mds_2008):
        """Test the truncated mean of a heavy-tailed law."""
        mean = mean_income(mds_2008, upper=1e6)
        assert 0 < mean < 1e6

    def test_mean_equals_integrated_ccdf(self, mds_2009):
        """Test E[m] against the integral of the CCDF."""
        p = mds_2009
        via_ccdf = integrate(
            lambda m: float(ccdf_eq(m, p)),
            0.0,
            math.inf,
            ref=p.T / 100.0,
            breaks=(p.m0, p.m1),
            cap=1e4 * p.m1,
        )
        assert mean_income(p) == pytest.approx(via_ccdf, rel=1e-6)
        assert 0 < mean_income(p) < p.m1

    @pytest.mark.parametrize(
        "year, dataset", [(2009, Dataset.MATCHED), (2005, Dataset.SURVEY_ONLY)]
    )
    def test_mean_with_finite_tail_mean(self, year, dataset):
        """Test that rows with alpha1 > 1 have a finite mean below m1."""
        p = normalize(published(year, dataset))
        mean = mean_income(p)
        assert math.isfinite(mean)
        assert 0 < mean < p.m1
        assert mean > mean_income(p, upper=p.m1)

    def test_remainder_beyond_cap_matches_truncation(self):
        """Test that the untruncated mean is the limit of truncated means."""
        p = normalize(published(2005, Dataset.SURVEY_ONLY))
        truncated = mean_income(p, upper=1e4 * p.m1)
        assert mean_income(p) == pytest.approx(truncated, rel=0.05)
        assert mean_income(p) > truncated
