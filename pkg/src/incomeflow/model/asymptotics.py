"""Closed-form approximants of the equilibrium density in its three regimes."""

import math

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field

from incomeflow.model.distribution import FloatOrArray, pdf_eq
from incomeflow.model.params import AsymptoticRegime, EyParams, Regime

CHECK_POINTS = 200


class Asymptote(BaseModel):
    """A regime approximant c exp(-m/T) or C m^-(exponent+1).

    Attributes:
        regime: the regime and the interval it was checked on
        prefactor: c (1/(EUR/year)) or C (EUR^exponent)
        temperature: T for the Boltzmann-Gibbs law, else None
        exponent: Pareto exponent, else None
        max_relative_error: largest |approximant/pdf_eq - 1| over the range
    """

    model_config = ConfigDict(frozen=True)

    regime: AsymptoticRegime
    prefactor: float = Field(gt=0)
    temperature: float | None = None
    exponent: float | None = None
    max_relative_error: float = Field(ge=0)

    def __call__(self, m: ArrayLike) -> FloatOrArray:
        arr = np.asarray(m, dtype=float)
        if self.temperature is not None:
            values = self.prefactor * np.exp(-arr / self.temperature)
        else:
            values = self.prefactor * arr ** (-(self.exponent + 1.0))
        return float(values) if values.ndim == 0 else values


def _check_grid(lo: float, hi: float) -> np.ndarray:
    if lo > 0:
        return np.geomspace(lo, hi, CHECK_POINTS)
    return np.linspace(lo, hi, CHECK_POINTS)


def asymptote(p: EyParams, regime: AsymptoticRegime) -> Asymptote:
    """Approximant of `pdf_eq` for one regime, with its error over the range.

    Boltzmann-Gibbs: c' exp(-m/T) for m << m0.
    Medium Pareto: c' exp(-(m0/T) pi/2) m0^(alpha+1) m^-(alpha+1) for
    m0 << m < m1.
    High Pareto: the same with c'', T1 and alpha1 for m >> m1.

    Raises:
        ParameterError: if the validity range leaves the regime's domain
    """
    regime.check_bounds(p)
    half_pi = 0.5 * math.pi
    if regime.regime is Regime.BOLTZMANN_GIBBS:
        kwargs = dict(prefactor=p.c_prime, temperature=p.T)
    elif regime.regime is Regime.PARETO_MEDIUM:
        kwargs = dict(
            prefactor=p.c_prime
            * math.exp(-(p.m0 / p.T) * half_pi)
            * p.m0 ** (p.alpha + 1.0),
            exponent=p.alpha,
        )
    else:
        kwargs = dict(
            prefactor=p.c_double_prime
            * math.exp(-(p.m0 / p.T1) * half_pi)
            * p.m0 ** (p.alpha1 + 1.0),
            exponent=p.alpha1,
        )

    draft = Asymptote(regime=regime, max_relative_error=0.0, **kwargs)
    grid = _check_grid(*regime.validity_range)
    error = float(np.max(np.abs(draft(grid) / pdf_eq(grid, p) - 1.0)))
    return draft.model_copy(update={"max_relative_error": error})


def local_slope(m: ArrayLike, p: EyParams) -> FloatOrArray:
    """d log pdf_eq / d log m, analytically, on the branch containing m."""
    arr = np.asarray(m, dtype=float)
    high = arr >= p.m1
    temperature = np.where(high, p.T1, p.T)
    exponent = np.where(high, p.alpha1, p.alpha)
    x = arr / p.m0
    values = -(p.m0 / temperature) * x / (1.0 + x * x) - (exponent + 1.0) * x * x / (
        1.0 + x * x
    )
    return float(values) if values.ndim == 0 else values
