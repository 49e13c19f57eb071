"""
Integral-form equilibrium density, evaluated by adaptive quadrature.

The stationary solution of the Fokker-Planck equation with zero flux is

    P(m) = const / B(m) * exp(-integral_{m_init}^{m} A(x)/B(x) dx)

with the threshold drift A and diffusion B of `LangevinParams`. Nothing here
uses the closed form, so the result is an independent check on `pdf_eq`.
"""

import math
from functools import lru_cache

from loguru import logger

from config.env import NUMERICS
from incomeflow.errors import ParameterError
from incomeflow.model.params import LangevinParams
from incomeflow.model.quadrature import integrate

logger = logger.bind(component="model")


def drift_at(m: float, lp: LangevinParams) -> float:
    """A(m) of the threshold form."""
    if m < lp.m1:
        return lp.A0 + lp.a * m
    return lp.A0_prime + lp.a_prime * m


def diffusion_at(m: float, lp: LangevinParams) -> float:
    """B(m) = B0 + b m^2."""
    return lp.B0 + lp.b * m * m


def _scale(lp: LangevinParams) -> float:
    return min(lp.B0 / lp.A0, lp.m0, lp.m1) / 100.0


def _exponent(m: float, lp: LangevinParams) -> float:
    """integral_{m_init}^{m} A/B."""
    if m <= lp.m_init:
        return 0.0
    return integrate(
        lambda x: drift_at(x, lp) / diffusion_at(x, lp),
        lp.m_init,
        m,
        ref=_scale(lp),
        breaks=(lp.m1, lp.m0),
        what="drift/diffusion integral",
    )


def _unnormalised(m: float, lp: LangevinParams) -> float:
    return math.exp(-_exponent(m, lp)) / diffusion_at(m, lp)


@lru_cache(maxsize=32)
def oracle_normalisation(lp: LangevinParams) -> float:
    """integral_{m_init}^{inf} of the unnormalised density.

    Raises:
        QuadratureError: if any piece fails to converge
    """
    total = integrate(
        lambda m: _unnormalised(m, lp),
        lp.m_init,
        math.inf,
        ref=_scale(lp),
        breaks=(lp.m1, lp.m0),
        cap=NUMERICS.TAIL_CUT * lp.m1,
        what="oracle normalisation",
    )
    logger.debug(f"Oracle normalisation {total:.12e} for {lp!r}")
    return total


def pdf_from_integral(m: float, lp: LangevinParams) -> float:
    """Equilibrium density at m from the integral form (1/(EUR/year)).

    Raises:
        ParameterError: if m < m_init
        QuadratureError: with the achieved error when quadrature fails
    """
    if m < lp.m_init:
        raise ParameterError(f"m={m} lies below m_init={lp.m_init}")
    return _unnormalised(m, lp) / oracle_normalisation(lp)
