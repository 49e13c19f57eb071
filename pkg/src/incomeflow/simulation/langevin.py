"""
Euler-Maruyama ensemble of the threshold Langevin dynamics.

    dm = -A(m) dt + sqrt(2 B(m)) dW        (Ito)

with A(m) = A0 + a m below m1, A0' + a' m above, B(m) = B0 + b m^2, and
reflection at zero income. Every agent owns the random stream seeded by
(seed, agent index), so any split of the ensemble over worker processes
reproduces the serial result exactly.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import List, Tuple, Union

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike
from scipy import stats

from incomeflow.errors import ConfigurationError, EmptySampleError
from incomeflow.model import EyParams, LangevinParams, cdf_eq
from incomeflow.simulation.config import SimConfig, StationaryHistogram

logger = logger.bind(component="simulation")

FloatOrArray = Union[float, np.ndarray]

# normal draws are taken per agent in blocks of this many steps
NOISE_BLOCK = 256
# lowest log-spaced bin edge relative to min(B0/A0, m0)
HISTOGRAM_FLOOR = 1e-3


def drift(m: ArrayLike, lp: LangevinParams) -> FloatOrArray:
    """A(m) in the threshold form (EUR/year per year)."""
    arr = np.asarray(m, dtype=float)
    values = np.where(arr < lp.m1, lp.A0 + lp.a * arr, lp.A0_prime + lp.a_prime * arr)
    return float(values) if values.ndim == 0 else values


def diffusion(m: ArrayLike, lp: LangevinParams) -> FloatOrArray:
    """B(m) = B0 + b m^2 = b (m0^2 + m^2)."""
    arr = np.asarray(m, dtype=float)
    values = lp.B0 + lp.b * arr * arr
    return float(values) if values.ndim == 0 else values


def step(
    m: ArrayLike, dt: float, lp: LangevinParams, noise: ArrayLike
) -> FloatOrArray:
    """One Euler-Maruyama update with reflection at zero.

    m' = |m - A(m) dt + sqrt(2 B(m) dt) noise|

    Args:
        m: current incomes (>= 0)
        dt: time step (years)
        lp: coefficients
        noise: standard normal draws, broadcast against m
    """
    arr = np.asarray(m, dtype=float)
    moved = arr - np.asarray(drift(arr, lp)) * dt + np.sqrt(
        2.0 * np.asarray(diffusion(arr, lp)) * dt
    ) * np.asarray(noise, dtype=float)
    values = np.abs(moved)
    return float(values) if values.ndim == 0 else values


def _run_agents(cfg: SimConfig, start: int, stop: int) -> np.ndarray:
    """Recorded states of agents start..stop-1, shape (n_records, stop-start)."""
    streams = [
        np.random.default_rng(np.random.SeedSequence([cfg.seed, i]))
        for i in range(start, stop)
    ]
    m = np.full(stop - start, cfg.start_income)
    records = np.empty((cfg.n_records, stop - start))
    n_burn, stride, total = cfg.n_burn_steps, cfg.record_stride, cfg.n_steps

    for block_start in range(0, total, NOISE_BLOCK):
        size = min(NOISE_BLOCK, total - block_start)
        noise = np.stack([rng.standard_normal(size) for rng in streams], axis=1)
        for j in range(size):
            m = step(m, cfg.dt, cfg.lp, noise[j])
            done = block_start + j + 1 - n_burn
            if done > 0 and done % stride == 0:
                records[done // stride - 1] = m
    return records


def _agent_ranges(n_agents: int, jobs: int) -> List[Tuple[int, int]]:
    bounds = np.linspace(0, n_agents, min(jobs, n_agents) + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def run_ensemble(cfg: SimConfig, jobs: int = 1) -> np.ndarray:
    """Recorded states of the whole ensemble, shape (n_records, n_agents).

    Args:
        cfg: the run configuration
        jobs: worker processes; agents are split in contiguous ranges

    Raises:
        StabilityError: if dt violates the stability heuristic
        ConfigurationError: if jobs < 1
    """
    cfg.check_stability()
    if jobs < 1:
        raise ConfigurationError(f"jobs={jobs} must be at least 1")

    ranges = _agent_ranges(cfg.n_agents, jobs)
    logger.info(
        f"Simulating {cfg.n_agents} agents for {cfg.n_steps} steps "
        f"(dt={cfg.dt}, {cfg.n_records} records) on {len(ranges)} worker(s)"
    )
    if len(ranges) == 1:
        parts = [_run_agents(cfg, *ranges[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(ranges)) as pool:
            futures = [pool.submit(_run_agents, cfg, a, b) for a, b in ranges]
            parts = [f.result() for f in futures]
    states = np.concatenate(parts, axis=1)
    logger.debug(
        f"Recorded {states.size} states, median {np.median(states):.6g}, "
        f"max {states.max():.6g}"
    )
    return states


def build_histogram(
    states: np.ndarray, lp: LangevinParams, n_bins: int = 200
) -> StationaryHistogram:
    """Density histogram of `states` on [0, floor) plus log-spaced bins.

    Raises:
        EmptySampleError: for an empty state array
    """
    flat = np.asarray(states, dtype=float).ravel()
    if flat.size == 0:
        raise EmptySampleError("no recorded states to histogram")
    floor = HISTOGRAM_FLOOR * min(lp.B0 / lp.A0, lp.m0)
    top = max(float(flat.max()) * (1.0 + 1e-12), 10.0 * floor)
    edges = np.concatenate([[0.0], np.geomspace(floor, top, n_bins)])
    counts, _ = np.histogram(flat, bins=edges)
    return StationaryHistogram.from_counts(edges, counts.astype(float))


def simulate(cfg: SimConfig, jobs: int = 1) -> StationaryHistogram:
    """Stationary histogram of the ensemble after burn-in.

    Raises:
        StabilityError: if dt violates the stability heuristic
    """
    return build_histogram(run_ensemble(cfg, jobs), cfg.lp, cfg.n_bins)


def ks_distance(states: np.ndarray, p: EyParams) -> float:
    """Kolmogorov-Smirnov distance between the states and the equilibrium law."""
    flat = np.asarray(states, dtype=float).ravel()
    if flat.size == 0:
        raise EmptySampleError("no states to compare")
    return float(stats.kstest(flat, lambda x: cdf_eq(x, p)).statistic)


def ks_distance_exponential(states: np.ndarray, temperature: float) -> float:
    """Kolmogorov-Smirnov distance to the Boltzmann-Gibbs law exp(-m/T)/T."""
    flat = np.asarray(states, dtype=float).ravel()
    if flat.size == 0:
        raise EmptySampleError("no states to compare")
    return float(stats.kstest(flat, "expon", args=(0.0, temperature)).statistic)
