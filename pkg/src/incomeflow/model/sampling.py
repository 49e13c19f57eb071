"""Inverse-transform sampling from the equilibrium law."""

from functools import lru_cache

import numpy as np
from loguru import logger
from scipy.interpolate import PchipInterpolator

from config.env import NUMERICS
from incomeflow.empirical.models import IncomeSample, IncomeSource
from incomeflow.errors import ParameterError
from incomeflow.model.distribution import tabulate
from incomeflow.model.params import EyShape

logger = logger.bind(component="model")

HEAD_FRACTION = 1e-4
SPAN_ABOVE_M1 = 1e4


class InverseCcdf:
    """Income as a function of exceedance probability.

    Between m0 * 1e-4 and m1 * 1e4 log-income is a monotone cubic of
    -log(exceedance) through log-spaced nodes. Below the grid the CDF is
    linear in income (the density is flat there); above it the Pareto
    asymptote is inverted analytically.
    """

    def __init__(self, shape: EyShape):
        table = tabulate(shape)
        self.alpha1 = shape.alpha1
        self.m_lo = shape.m0 * HEAD_FRACTION
        self.m_hi = shape.m1 * SPAN_ABOVE_M1
        grid = np.geomspace(self.m_lo, self.m_hi, NUMERICS.SAMPLING_NODES)
        q = table.ccdf(grid)
        self.q_lo, self.q_hi = float(q[0]), float(q[-1])
        self._spline = PchipInterpolator(-np.log(q), np.log(grid))

    def __call__(self, q: np.ndarray) -> np.ndarray:
        out = np.empty_like(q)
        head = q > self.q_lo
        tail = q < self.q_hi
        body = ~(head | tail)
        out[head] = self.m_lo * (1.0 - q[head]) / (1.0 - self.q_lo)
        out[body] = np.exp(self._spline(-np.log(q[body])))
        out[tail] = self.m_hi * (q[tail] / self.q_hi) ** (-1.0 / self.alpha1)
        return out


@lru_cache(maxsize=32)
def inverse_ccdf(shape: EyShape) -> InverseCcdf:
    return InverseCcdf(shape)


def sample(p: EyShape, n: int, seed: int, year: int = 0) -> IncomeSample:
    """Draw `n` independent incomes from the equilibrium law.

    The stream is numpy's default generator seeded through a SeedSequence,
    so a fixed seed reproduces the sample exactly.

    Args:
        p: the distribution parameters
        n: number of draws (>= 1)
        seed: random seed
        year: year label attached to every record

    Returns:
        IncomeSample: Survey-tagged records
    """
    if n < 1:
        raise ParameterError(f"n={n} must be at least 1")
    shape = p.shape()
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    # 1 - U lies in (0, 1], so log(q) stays finite
    q = 1.0 - rng.random(n)
    incomes = inverse_ccdf(shape)(q)
    # q == 1 maps to income 0, which is not a valid record
    incomes = np.maximum(incomes, np.nextafter(0.0, 1.0))
    logger.debug(f"Drew {n} incomes with seed {seed}")
    return IncomeSample.from_incomes(
        incomes,
        source=IncomeSource.SURVEY,
        year=year,
        metadata={
            "generator": "incomeflow.sample",
            "seed": seed,
            "params": shape.model_dump(),
        },
    )
