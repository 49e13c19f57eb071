"""Langevin ensemble simulation of household incomes."""

from incomeflow.simulation.config import (
    Boundary,
    SimConfig,
    StationaryHistogram,
    default_config,
)
from incomeflow.simulation.langevin import (
    build_histogram,
    diffusion,
    drift,
    ks_distance,
    ks_distance_exponential,
    run_ensemble,
    simulate,
    step,
)

__all__ = [
    "Boundary",
    "SimConfig",
    "StationaryHistogram",
    "build_histogram",
    "default_config",
    "diffusion",
    "drift",
    "ks_distance",
    "ks_distance_exponential",
    "run_ensemble",
    "simulate",
    "step",
]
