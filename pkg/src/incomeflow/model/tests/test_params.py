"""Tests for the parameter types and the Langevin/shape conversions."""

import json
import math

import pytest
from pydantic import ValidationError

from incomeflow.errors import ParameterError
from incomeflow.model import (
    AsymptoticRegime,
    EyParams,
    EyShape,
    LangevinParams,
    Regime,
    from_langevin,
    to_langevin,
)
from incomeflow.model.params import effective_shape


def make_langevin(**overrides) -> LangevinParams:
    values = dict(A0=2.0, a=4.0, A0_prime=1.0, a_prime=1.0, B0=2.0, b=2.0, m1=10.0)
    values.update(overrides)
    return LangevinParams(**values)


class TestLangevinParams:
    """Tests for LangevinParams validation."""

    def test_m0_is_sqrt_of_diffusion_ratio(self):
        """Test that m0 = sqrt(B0/b)."""
        lp = make_langevin(B0=8.0, b=2.0)
        assert lp.m0 == pytest.approx(2.0, rel=1e-15)

    def test_rejects_non_positive_diffusion(self):
        """Test that B0 and b must be positive."""
        with pytest.raises(ValidationError):
            make_langevin(B0=0.0)
        with pytest.raises(ValidationError):
            make_langevin(b=-1.0)

    def test_rejects_m_init_at_or_above_m1(self):
        """Test that m_init must lie below m1."""
        with pytest.raises(ValidationError):
            make_langevin(m_init=10.0)

    def test_rejects_high_branch_slope_without_tail(self):
        """Test that a_prime <= -b is rejected (alpha1 <= 0)."""
        with pytest.raises(ValidationError):
            make_langevin(a_prime=-2.0, b=2.0)

    def test_accepts_negative_high_branch_slope(self):
        """Test that -b < a_prime < 0 (0 < alpha1 < 1) is allowed."""
        lp = make_langevin(a_prime=-0.2, b=2.0)
        assert lp.a_prime == -0.2

    def test_json_field_names(self):
        """Test that the JSON document uses exactly the documented names."""
        lp = make_langevin()
        doc = json.loads(lp.model_dump_json())
        assert set(doc) == {"A0", "a", "A0_prime", "a_prime", "B0", "b", "m1", "m_init"}
        assert LangevinParams.model_validate_json(lp.model_dump_json()) == lp


class TestEyShape:
    """Tests for EyShape and EyParams validation."""

    def test_rejects_m1_not_above_m0(self):
        """Test that m1 must exceed m0."""
        with pytest.raises(ValidationError):
            EyShape(T=1.0, T1=1.0, m0=5.0, m1=5.0, alpha=3.0, alpha1=2.0)

    def test_rejects_alpha1_not_below_alpha(self):
        """Test that alpha1 must be below alpha."""
        with pytest.raises(ValidationError):
            EyShape(T=1.0, T1=1.0, m0=1.0, m1=5.0, alpha=2.0, alpha1=2.0)

    def test_rejects_non_positive_alpha1(self):
        """Test that alpha1 must be positive."""
        with pytest.raises(ValidationError):
            EyShape(T=1.0, T1=1.0, m0=1.0, m1=5.0, alpha=2.0, alpha1=0.0)

    def test_scaled_multiplies_income_dimensions_only(self):
        """Test that scaled() leaves the exponents alone."""
        shape = EyShape(T=1.0, T1=2.0, m0=3.0, m1=4.0, alpha=3.0, alpha1=1.0)
        scaled = shape.scaled(10.0)
        assert (scaled.T, scaled.T1, scaled.m0, scaled.m1) == (10.0, 20.0, 30.0, 40.0)
        assert (scaled.alpha, scaled.alpha1) == (3.0, 1.0)

    def test_shape_drops_constants(self, mds_2008):
        """Test that shape() returns the structural part of EyParams."""
        shape = mds_2008.shape()
        assert type(shape) is EyShape
        assert shape.alpha1 == mds_2008.alpha1

    def test_params_json_round_trip(self, mds_2008):
        """Test EyParams JSON field names and round trip."""
        doc = json.loads(mds_2008.model_dump_json())
        assert set(doc) == {
            "T",
            "T1",
            "m0",
            "m1",
            "alpha",
            "alpha1",
            "c_prime",
            "c_double_prime",
        }
        assert EyParams.model_validate_json(mds_2008.model_dump_json()) == mds_2008


class TestFromLangevin:
    """Tests for from_langevin and its inverse."""

    def test_alpha_from_slope_ratio(self):
        """Test that a/b = 2 gives alpha = 3."""
        p = from_langevin(make_langevin(a=4.0, b=2.0))
        assert p.alpha == 3.0

    def test_identity_ratios(self):
        """Test that B0 = A0 gives T = 1 and B0 = b gives m0 = 1."""
        p = from_langevin(make_langevin(A0=2.0, B0=2.0, b=2.0))
        assert p.T == 1.0
        assert p.m0 == 1.0

    def test_defining_ratios(self):
        """Test every effective parameter against its defining ratio."""
        lp = make_langevin(A0=3.0, a=5.0, A0_prime=0.5, a_prime=0.25, B0=7.0, b=0.5)
        p = from_langevin(lp)
        assert p.alpha == 1.0 + 5.0 / 0.5
        assert p.alpha1 == 1.0 + 0.25 / 0.5
        assert p.T == 7.0 / 3.0
        assert p.T1 == 7.0 / 0.5
        assert p.m0 == math.sqrt(7.0 / 0.5)
        assert p.m1 == lp.m1
        assert p.c_prime > 0 and p.c_double_prime > 0

    def test_round_trip_through_2008_row(self, mds_2008):
        """Test that to_langevin then from_langevin reproduces the 2008 row."""
        back = from_langevin(to_langevin(mds_2008, b=1.0))
        for name in ("T", "T1", "m0", "m1", "alpha", "alpha1"):
            assert getattr(back, name) == pytest.approx(
                getattr(mds_2008, name), rel=1e-12
            )
        assert back.c_prime == pytest.approx(mds_2008.c_prime, rel=1e-12)

    def test_round_trip_is_gauge_free(self, mds_2009):
        """Test that the choice of b does not change the effective parameters."""
        slow = effective_shape(to_langevin(mds_2009, b=0.01))
        fast = effective_shape(to_langevin(mds_2009, b=3.0))
        for name in ("T", "T1", "m0", "alpha", "alpha1"):
            assert getattr(slow, name) == pytest.approx(getattr(fast, name), rel=1e-12)

    def test_rejects_m0_not_below_m1(self):
        """Test that sqrt(B0/b) >= m1 is rejected."""
        with pytest.raises(ParameterError):
            from_langevin(make_langevin(B0=200.0, b=1.0, m1=10.0))

    def test_rejects_alpha1_not_below_alpha(self):
        """Test that a' >= a surfaces as ParameterError."""
        with pytest.raises(ParameterError):
            from_langevin(make_langevin(a=1.0, a_prime=2.0))


class TestAsymptoticRegime:
    """Tests for AsymptoticRegime bounds."""

    def test_rejects_empty_interval(self):
        """Test that validity ranges must be proper intervals."""
        with pytest.raises(ValidationError):
            AsymptoticRegime(regime=Regime.PARETO_HIGH, validity_range=(5.0, 5.0))

    def test_bounds_checked_against_params(self, mds_2008):
        """Test each regime's domain check."""
        AsymptoticRegime(
            regime=Regime.BOLTZMANN_GIBBS, validity_range=(0.0, mds_2008.m0)
        ).check_bounds(mds_2008)
        with pytest.raises(ParameterError):
            AsymptoticRegime(
                regime=Regime.BOLTZMANN_GIBBS, validity_range=(0.0, 2 * mds_2008.m0)
            ).check_bounds(mds_2008)
        with pytest.raises(ParameterError):
            AsymptoticRegime(
                regime=Regime.PARETO_HIGH, validity_range=(mds_2008.m0, mds_2008.m1)
            ).check_bounds(mds_2008)
        with pytest.raises(ParameterError):
            AsymptoticRegime(
                regime=Regime.PARETO_MEDIUM, validity_range=(1.0, mds_2008.m1 / 2)
            ).check_bounds(mds_2008)
