"""Fitting the equilibrium law to empirical CCDFs."""

from incomeflow.fitting.crossover import crossover_guess
from incomeflow.fitting.fitter import default_fit_config, fit
from incomeflow.fitting.models import (
    PARAMETER_ORDER,
    CrossoverGuess,
    FitConfig,
    FitReport,
    Loss,
    Parameter,
)
from incomeflow.fitting.objective import (
    grouped_divergence,
    objective,
    weighted_log_residuals,
)
from incomeflow.fitting.report import (
    format_parameter_table,
    grid_curve,
    noise_free_curve,
    overlay_frame,
    published_comparison,
)

__all__ = [
    "CrossoverGuess",
    "FitConfig",
    "FitReport",
    "Loss",
    "PARAMETER_ORDER",
    "Parameter",
    "crossover_guess",
    "default_fit_config",
    "fit",
    "format_parameter_table",
    "grid_curve",
    "grouped_divergence",
    "noise_free_curve",
    "objective",
    "overlay_frame",
    "published_comparison",
    "weighted_log_residuals",
]
