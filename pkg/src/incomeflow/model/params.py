"""
Parameter types of the Extended Yakovenko model.

Two parameterisations describe the same equilibrium law:

- `LangevinParams`: the microscopic coefficients of the threshold drift
  A(m) = A0 + a m (m < m1), A0' + a' m (m >= m1) and of the diffusion
  B(m) = B0 + b m^2.
- `EyShape` / `EyParams`: the effective parameters of the closed-form
  two-branch density (temperatures, crossover incomes, Pareto exponents),
  which depend on the microscopic ones only through ratios.

All models are frozen, hashable and serialise to JSON with exactly the field
names below.
"""

import math
from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from incomeflow.errors import ParameterError


class LangevinParams(BaseModel):
    """Coefficients of the Langevin dynamics with threshold drift.

    Attributes:
        A0: drift offset, low branch (EUR/year)
        a: drift slope, low branch (1/year)
        A0_prime: drift offset, high branch (EUR/year)
        a_prime: drift slope, high branch (1/year)
        B0: additive diffusion strength (EUR^2/year)
        b: multiplicative diffusion strength (1/year)
        m1: branch-crossover income (EUR/year)
        m_init: lowest household income (EUR/year)
    """

    model_config = ConfigDict(frozen=True)

    A0: float = Field(gt=0)
    a: float = Field(ge=0)
    A0_prime: float = Field(gt=0)
    a_prime: float
    B0: float = Field(gt=0)
    b: float = Field(gt=0)
    m1: float = Field(gt=0)
    m_init: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def check_ranges(self) -> "LangevinParams":
        # alpha1 = 1 + a'/b must stay positive for a normalisable tail
        if self.a_prime <= -self.b:
            raise ValueError(
                f"a_prime={self.a_prime} gives a non-positive high-branch exponent "
                f"(needs a_prime > -b = {-self.b})"
            )
        if self.m_init >= self.m1:
            raise ValueError(f"m_init={self.m_init} must be below m1={self.m1}")
        return self

    @property
    def m0(self) -> float:
        """Additive/multiplicative diffusion crossover sqrt(B0/b)."""
        return math.sqrt(self.B0 / self.b)


class EyShape(BaseModel):
    """The six structural parameters of the two-branch equilibrium law."""

    model_config = ConfigDict(frozen=True)

    T: float = Field(gt=0, description="low/medium income temperature (EUR/year)")
    T1: float = Field(gt=0, description="high income temperature (EUR/year)")
    m0: float = Field(gt=0, description="low/medium crossover income (EUR/year)")
    m1: float = Field(gt=0, description="medium/high crossover income (EUR/year)")
    alpha: float = Field(gt=0, description="medium-class Pareto exponent")
    alpha1: float = Field(gt=0, description="high-class Pareto exponent")

    @model_validator(mode="after")
    def check_ordering(self) -> "EyShape":
        if self.m1 <= self.m0:
            raise ValueError(f"m1={self.m1} must exceed m0={self.m0}")
        if self.alpha1 >= self.alpha:
            raise ValueError(
                f"alpha1={self.alpha1} must be below alpha={self.alpha}"
            )
        return self

    def shape(self) -> "EyShape":
        """The structural part alone, dropping any normalisation constants."""
        return EyShape(**{name: getattr(self, name) for name in EyShape.model_fields})

    def scaled(self, factor: float) -> "EyShape":
        """Rescale every income-dimension parameter by `factor`."""
        return EyShape(
            T=self.T * factor,
            T1=self.T1 * factor,
            m0=self.m0 * factor,
            m1=self.m1 * factor,
            alpha=self.alpha,
            alpha1=self.alpha1,
        )


class EyParams(EyShape):
    """Structural parameters plus the two branch normalisation constants.

    Instances are produced by `incomeflow.model.distribution.normalize`;
    `c_double_prime` is fixed by continuity of the density at m1.
    """

    c_prime: float = Field(gt=0, description="low-branch normalisation (1/(EUR/year))")
    c_double_prime: float = Field(
        gt=0, description="high-branch normalisation (1/(EUR/year))"
    )


class Regime(str, Enum):
    """Asymptotic regimes of the equilibrium law."""

    BOLTZMANN_GIBBS = "BoltzmannGibbs"
    PARETO_MEDIUM = "ParetoMedium"
    PARETO_HIGH = "ParetoHigh"


class AsymptoticRegime(BaseModel):
    """An asymptotic regime together with the income interval it is used on."""

    model_config = ConfigDict(frozen=True)

    regime: Regime
    validity_range: Tuple[float, float]

    @model_validator(mode="after")
    def check_range(self) -> "AsymptoticRegime":
        lo, hi = self.validity_range
        if not 0 <= lo < hi:
            raise ValueError(f"validity_range {self.validity_range} is not an interval")
        return self

    def check_bounds(self, p: EyShape) -> None:
        """Raise ParameterError if the interval leaves the regime's domain."""
        lo, hi = self.validity_range
        if self.regime is Regime.BOLTZMANN_GIBBS and hi > p.m0:
            raise ParameterError(f"Boltzmann-Gibbs range must end below m0={p.m0}")
        if self.regime is Regime.PARETO_MEDIUM and not (p.m0 < lo and hi < p.m1):
            raise ParameterError(
                f"medium Pareto range must lie inside (m0, m1)=({p.m0}, {p.m1})"
            )
        if self.regime is Regime.PARETO_HIGH and lo < p.m1:
            raise ParameterError(f"high Pareto range must start at or above m1={p.m1}")


def effective_shape(lp: LangevinParams) -> EyShape:
    """Map microscopic coefficients to the structural parameters.

    Raises:
        ParameterError: if the ratios give alpha1 <= 0, m0 >= m1 or
            alpha1 >= alpha
    """
    alpha = 1.0 + lp.a / lp.b
    alpha1 = 1.0 + lp.a_prime / lp.b
    m0 = lp.m0
    if alpha1 <= 0:
        raise ParameterError(f"alpha1={alpha1} is not positive")
    if m0 >= lp.m1:
        raise ParameterError(f"m0={m0} is not below m1={lp.m1}")
    try:
        return EyShape(
            T=lp.B0 / lp.A0,
            T1=lp.B0 / lp.A0_prime,
            m0=m0,
            m1=lp.m1,
            alpha=alpha,
            alpha1=alpha1,
        )
    except ValueError as e:
        raise ParameterError(str(e)) from e


def to_langevin(p: EyShape, b: float = 1.0, m_init: float = 0.0) -> LangevinParams:
    """Microscopic coefficients reproducing `p` in the gauge `b` (1/year).

    The equilibrium law only fixes ratios of the coefficients, so `b` is free.
    """
    B0 = b * p.m0 * p.m0
    return LangevinParams(
        A0=B0 / p.T,
        a=(p.alpha - 1.0) * b,
        A0_prime=B0 / p.T1,
        a_prime=(p.alpha1 - 1.0) * b,
        B0=B0,
        b=b,
        m1=p.m1,
        m_init=m_init,
    )
