"""Crossover incomes from a continuous three-segment fit in log-log coordinates."""

import math
from typing import Tuple

import numpy as np
import pandas as pd
from loguru import logger

from incomeflow.empirical.models import CcdfCurve
from incomeflow.errors import ConfigurationError
from incomeflow.fitting.models import CrossoverGuess

logger = logger.bind(component="fitting")

N_BINS = 200
# breakpoint candidates lie on multiples of this many decades
GRID_STEP = 0.05
MIN_POINTS = 100
MIN_SEGMENT_BINS = 3
# slope change below which a knee is not trusted
MIN_SLOPE_CHANGE = 0.2
EDGE_CELLS = 2


def binned_loglog(c: CcdfCurve, n_bins: int = N_BINS) -> Tuple[np.ndarray, np.ndarray]:
    """Mean (log10 income, log10 exceedance) per equal-width log-income bin."""
    x = np.log10(c.incomes)
    y = np.log10(c.exceedances)
    lo, hi = float(x.min()), float(x.max())
    if hi <= lo:
        raise ConfigurationError("all incomes are equal; the curve has no knees")
    edges = np.linspace(lo, hi, n_bins + 1)
    bins = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, n_bins - 1)
    means = pd.DataFrame({"bin": bins, "x": x, "y": y}).groupby("bin").mean()
    return means["x"].to_numpy(), means["y"].to_numpy()


def _hinge_fit(x: np.ndarray, y: np.ndarray, b1: float, b2: float):
    design = np.column_stack(
        [np.ones_like(x), x, np.maximum(0.0, x - b1), np.maximum(0.0, x - b2)]
    )
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return coef, float(resid @ resid)


def crossover_guess(c: CcdfCurve) -> CrossoverGuess:
    """Breakpoints of the best continuous three-segment line through the curve.

    Candidates sit on a 0.05-decade grid; each segment must cover at least
    three of the 200 log-income bins. When three segments explain the data
    no better than one line, both guesses fall back to the data edges.

    Raises:
        ConfigurationError: for fewer than 100 points; supply a manual guess
            through FitConfig.initial_guess instead
    """
    if len(c) < MIN_POINTS:
        raise ConfigurationError(
            f"crossover_guess needs at least {MIN_POINTS} points, got {len(c)}; "
            "pass an explicit initial_guess in the fit configuration"
        )
    x, y = binned_loglog(c)
    design = np.column_stack([np.ones_like(x), x])
    line, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    line_rss = float(np.sum((y - line[0] - line[1] * x) ** 2))

    grid = np.arange(math.ceil(x[0] / GRID_STEP), math.floor(x[-1] / GRID_STEP) + 1)
    grid = grid * GRID_STEP
    counts = np.searchsorted(x, grid)

    best = None
    for i, b1 in enumerate(grid):
        if counts[i] < MIN_SEGMENT_BINS:
            continue
        for j in range(i + 1, grid.size):
            if counts[j] - counts[i] < MIN_SEGMENT_BINS:
                continue
            if x.size - counts[j] < MIN_SEGMENT_BINS:
                break
            coef, rss = _hinge_fit(x, y, b1, grid[j])
            if best is None or rss < best[0]:
                best = (rss, i, j, coef)

    if best is None or line_rss - best[0] <= 1e-3 * line_rss + 1e-12:
        logger.warning("No distinct knees in the log-log curve; using the data edges")
        slope = float(line[1])
        return CrossoverGuess(
            m0=10.0 ** x[0],
            m1=10.0 ** x[-1],
            slopes=(slope, slope, slope),
            rss=line_rss,
            low_confidence=True,
        )

    rss, i, j, coef = best
    slopes = tuple(float(s) for s in np.cumsum(coef[1:4]))
    at_edge = i < EDGE_CELLS or j > grid.size - 1 - EDGE_CELLS
    weak = min(abs(coef[2]), abs(coef[3])) < MIN_SLOPE_CHANGE
    guess = CrossoverGuess(
        m0=10.0 ** grid[i],
        m1=10.0 ** grid[j],
        slopes=slopes,
        rss=rss,
        low_confidence=bool(at_edge or weak),
    )
    logger.debug(
        f"Crossover guess m0={guess.m0:.4g}, m1={guess.m1:.4g}, "
        f"slopes {slopes[0]:.3f}/{slopes[1]:.3f}/{slopes[2]:.3f}"
    )
    if guess.low_confidence:
        logger.warning("Crossover guess has low confidence")
    return guess
