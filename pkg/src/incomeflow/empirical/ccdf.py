"""Weibull plotting positions of income samples."""

import numpy as np
import pandas as pd
from loguru import logger

from incomeflow.empirical.models import CcdfCurve, IncomeSample
from incomeflow.errors import ConfigurationError, EmptySampleError
from incomeflow.model.distribution import ccdf_eq
from incomeflow.model.params import EyShape

logger = logger.bind(component="empirical")

# richest points kept undecimated by loglog_points
TOP_POINTS = 100


def build_ccdf(s: IncomeSample) -> CcdfCurve:
    """Rank the sample from the richest record down; rank l gets l/(n+1).

    Tied incomes keep distinct ranks in input order.

    Raises:
        EmptySampleError: if the sample has no records
    """
    n = len(s)
    if n == 0:
        raise EmptySampleError("cannot build a CCDF from an empty sample")
    order = np.argsort(-s.incomes, kind="stable")
    curve = CcdfCurve(
        incomes=s.incomes[order],
        exceedances=np.arange(1, n + 1) / (n + 1.0),
        n=n,
    )
    logger.debug(
        f"CCDF of {n} records spans {curve.incomes[-1]:.6g} to {curve.incomes[0]:.6g}"
    )
    return curve


def loglog_points(c: CcdfCurve, decimation: int = 1) -> pd.DataFrame:
    """Plot table of (log10 income, log10 exceedance).

    The 100 richest points are always kept; of the rest every
    `decimation`-th one is.

    Raises:
        ConfigurationError: if decimation < 1
    """
    if decimation < 1:
        raise ConfigurationError(f"decimation={decimation} must be at least 1")
    keep = np.arange(len(c))
    keep = np.concatenate([keep[:TOP_POINTS], keep[TOP_POINTS::decimation]])
    return pd.DataFrame(
        {
            "log10_income": np.log10(c.incomes[keep]),
            "log10_exceedance": np.log10(c.exceedances[keep]),
        }
    )


def max_deviation(c: CcdfCurve, p: EyShape) -> float:
    """Largest |empirical exceedance - ccdf_eq| over the curve points."""
    model = np.asarray(ccdf_eq(c.incomes, p))
    return float(np.max(np.abs(c.exceedances - model)))
