"""
Losses between an empirical CCDF and the model.

`objective` is the weighted mean of squared log10-exceedance residuals at
the curve's incomes. The richest ranks, whose plotting positions scatter
most, are down-weighted.

`grouped_divergence` compares the exceedance increments between consecutive
curve points with the model's: the Kullback-Leibler divergence of the
empirical cell shares from the model cell masses. For a sample curve it is
the negative grouped log-likelihood up to a constant, and it is zero on a
curve generated exactly by the model.
"""

from typing import Tuple

import numpy as np

from incomeflow.empirical.models import CcdfCurve
from incomeflow.errors import ConfigurationError
from incomeflow.model.distribution import ccdf_eq
from incomeflow.model.params import EyShape

TOP_RANKS = 5
TOP_WEIGHT = 0.2
MIN_POINTS = 10
TINY = 1e-300


def rank_weights(
    n: int, top_ranks: int = TOP_RANKS, top_weight: float = TOP_WEIGHT
) -> np.ndarray:
    """Weights of a curve of n points ordered richest first."""
    weights = np.ones(n)
    weights[: min(top_ranks, n)] = top_weight
    return weights


def log10_ccdf(incomes: np.ndarray, p: EyShape) -> np.ndarray:
    return np.log10(np.maximum(np.asarray(ccdf_eq(incomes, p)), TINY))


def weighted_log_residuals(
    p: EyShape,
    c: CcdfCurve,
    top_ranks: int = TOP_RANKS,
    top_weight: float = TOP_WEIGHT,
) -> Tuple[np.ndarray, np.ndarray]:
    """(log10 empirical - log10 model exceedance, weight) per curve point."""
    residuals = np.log10(c.exceedances) - log10_ccdf(c.incomes, p)
    return residuals, rank_weights(len(c), top_ranks, top_weight)


def weighted_mse(residuals: np.ndarray, weights: np.ndarray) -> float:
    if residuals.size == 0:
        return 0.0
    return float(np.sum(weights * residuals * residuals) / np.sum(weights))


def objective(
    p: EyShape,
    c: CcdfCurve,
    top_ranks: int = TOP_RANKS,
    top_weight: float = TOP_WEIGHT,
) -> float:
    """Weighted mean squared log10-exceedance residual of `c` under `p`.

    Raises:
        ConfigurationError: for curves with fewer than 10 points
    """
    if len(c) < MIN_POINTS:
        raise ConfigurationError(
            f"a curve of {len(c)} points is too short to fit (need {MIN_POINTS})"
        )
    return weighted_mse(*weighted_log_residuals(p, c, top_ranks, top_weight))


def increment_divergence(
    incomes: np.ndarray, exceedances: np.ndarray, p: EyShape
) -> float:
    """Divergence of the curve increments from the model's, richest point first.

    The cell above the richest point and the cell below the poorest one are
    included, so the shares sum to one.
    """
    shares = np.diff(np.concatenate([[0.0], exceedances, [1.0]]))
    model = np.concatenate([[0.0], np.asarray(ccdf_eq(incomes, p)), [1.0]])
    masses = np.maximum(np.diff(model), TINY)
    return float(np.sum(shares * np.log(shares / masses)))


def grouped_divergence(p: EyShape, c: CcdfCurve) -> float:
    """Divergence of the exceedance increments of `c` from those of `p`.

    Raises:
        ConfigurationError: for curves with fewer than 10 points
    """
    if len(c) < MIN_POINTS:
        raise ConfigurationError(
            f"a curve of {len(c)} points is too short to fit (need {MIN_POINTS})"
        )
    return increment_divergence(c.incomes, c.exceedances, p)
