"""
Staged fit of the six structural parameters to an empirical CCDF.

1. (T, m0, alpha) on the points below the current m1, scouted from a few
   m0 starts around the guess.
2. (T1, m1, alpha1) on the points above the geometric mean of m0 and m1.
3. A joint Nelder-Mead polish of every free parameter on all points,
   restarted from its best vertex with a shrinking simplex.

When T1 and m1 are both free, all three steps hold T1 = m1, as every
published parameter row does. A second polish then frees T1; its result is
kept only when the grouped likelihood improves by more than a
likelihood-ratio threshold.

Incomes and temperatures are fitted in log space, the exponents directly
with a floor of 0.01; parameter sets violating a structural invariant get a
flat penalty loss.
"""

import math
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.optimize import OptimizeResult, minimize, minimize_scalar

from incomeflow.empirical.models import CcdfCurve
from incomeflow.errors import ConfigurationError, IncomeFlowError
from incomeflow.fitting.crossover import crossover_guess
from incomeflow.fitting.models import (
    HIGH_STAGE,
    LOW_STAGE,
    FitConfig,
    FitReport,
    Loss,
    Parameter,
)
from incomeflow.fitting.objective import (
    MIN_POINTS,
    increment_divergence,
    log10_ccdf,
    rank_weights,
    weighted_mse,
)
from incomeflow.model.distribution import normalize
from incomeflow.model.params import EyShape

logger = logger.bind(component="fitting")

ALPHA_FLOOR = 0.01
INVALID_LOSS = 1e6
LOG_SCALED = frozenset({Parameter.T, Parameter.T1, Parameter.M0, Parameter.M1})
STAGE_STEP = 0.1
POLISH_STEP = 0.05
POLISH_SHRINK = 0.2
XATOL = 1e-7
MIN_TAIL_POINTS = 10
M0_STARTS = (0.5, 2.0, 4.0, 8.0)
SCOUT_EVALS = 150
# chi-square with one degree of freedom at the 1% level
T1_DEVIANCE = 6.63

FLAG_NOT_CONVERGED = "not_converged"
FLAG_M0_ABOVE_DATA = "m0_above_data"
FLAG_FEW_TAIL_POINTS = "few_tail_points"
FLAG_EXPONENTIAL = "exponential_adequate"
FLAG_LOW_CONFIDENCE = "low_confidence_crossover"
FLAG_T1_TIED = "t1_tied_to_m1"

Values = Dict[Parameter, float]


class _Points(NamedTuple):
    """Working set of curve points, richest first."""

    incomes: np.ndarray
    exceedances: np.ndarray
    weights: np.ndarray

    def subset(self, mask: np.ndarray) -> "_Points":
        return _Points(self.incomes[mask], self.exceedances[mask], self.weights[mask])

    def __len__(self) -> int:
        return int(self.incomes.size)


class _Loss:
    """Loss over a fixed point set as a function of the free parameters."""

    def __init__(
        self,
        points: _Points,
        values: Values,
        free: List[Parameter],
        kind: Loss,
        tie_t1: bool = False,
    ):
        self.points = points
        self.log_q = np.log10(points.exceedances)
        self.base = dict(values)
        self.free = free
        self.kind = kind
        self.tie_t1 = tie_t1
        self.n_evals = 0

    def encode(self, values: Values) -> np.ndarray:
        return np.array(
            [math.log(values[k]) if k in LOG_SCALED else values[k] for k in self.free]
        )

    def decode(self, z: np.ndarray) -> Values:
        values = dict(self.base)
        for k, v in zip(self.free, z):
            values[k] = math.exp(v) if k in LOG_SCALED else float(v)
        if self.tie_t1:
            values[Parameter.T1] = values[Parameter.M1]
        return values

    def shape(self, z: np.ndarray) -> Optional[EyShape]:
        if not np.all(np.isfinite(z)) or np.any(np.abs(z) > 700):
            return None
        values = self.decode(z)
        if min(values[Parameter.ALPHA], values[Parameter.ALPHA1]) < ALPHA_FLOOR:
            return None
        try:
            return _shape(values)
        except ValueError:
            return None

    def measure(self, shape: EyShape) -> float:
        if self.kind is Loss.GROUPED_LIKELIHOOD:
            return increment_divergence(
                self.points.incomes, self.points.exceedances, shape
            )
        residuals = self.log_q - log10_ccdf(self.points.incomes, shape)
        return weighted_mse(residuals, self.points.weights)

    def __call__(self, z: np.ndarray) -> float:
        self.n_evals += 1
        shape = self.shape(z)
        if shape is None:
            return INVALID_LOSS
        try:
            with np.errstate(all="ignore"):
                loss = self.measure(shape)
        except (IncomeFlowError, ArithmeticError):
            return INVALID_LOSS
        return loss if math.isfinite(loss) else INVALID_LOSS


def _shape(values: Values) -> EyShape:
    return EyShape(**{k.value: v for k, v in values.items()})


def _simplex(z0: np.ndarray, free: List[Parameter], step: float) -> np.ndarray:
    vertices = [z0]
    for i, name in enumerate(free):
        delta = step if name in LOG_SCALED else step * max(abs(z0[i]), 0.5)
        vertex = z0.copy()
        vertex[i] += delta
        vertices.append(vertex)
    return np.array(vertices)


def _nelder_mead(
    loss: _Loss, z0: np.ndarray, step: float, budget: int, fatol: float
) -> OptimizeResult:
    return minimize(
        loss,
        z0,
        method="Nelder-Mead",
        options={
            "initial_simplex": _simplex(z0, loss.free, step),
            "maxfev": max(budget, 1),
            "xatol": XATOL,
            "fatol": fatol,
            "adaptive": len(z0) > 2,
        },
    )


def _thin(incomes: np.ndarray, max_points: int) -> np.ndarray:
    """Rank indices kept for fitting, from a curve ordered richest first.

    The richest quarter of the budget is kept rank by rank. Half of the rest
    follows a uniform rank stride, the other half uniform steps in
    log-income, so the dense bulk and the sparse low incomes both stay
    represented.
    """
    n = incomes.size
    if n <= max_points:
        return np.arange(n)
    head = max_points // 4
    by_rank = (max_points - head) // 2
    by_income = max_points - head - by_rank
    picks = [np.arange(head), np.linspace(head, n - 1, by_rank).round().astype(int)]
    body = incomes[head:]
    positive = body[body > 0]
    if positive.size > 1 and positive[0] > positive[-1]:
        levels = np.geomspace(positive[0], positive[-1], by_income)
        picks.append(head + np.searchsorted(-body, -levels, side="left"))
    return np.unique(np.clip(np.concatenate(picks), 0, n - 1))


def _distinct(incomes: np.ndarray, keep: np.ndarray) -> np.ndarray:
    """Drop all but the poorest-ranked point of each run of tied incomes."""
    kept = incomes[keep]
    return keep[np.append(kept[1:] < kept[:-1], True)]


def _exponential_rms(
    incomes: np.ndarray, log_q: np.ndarray, weights: np.ndarray
) -> float:
    """Weighted RMS of the best pure exponential exp(-m/T)."""

    def loss(log_t: float) -> float:
        model = -incomes / (math.exp(log_t) * math.log(10.0))
        return weighted_mse(log_q - model, weights)

    lo = math.log(float(incomes.min()))
    hi = math.log(float(incomes.max())) + math.log(10.0)
    best = minimize_scalar(loss, bounds=(lo, hi), method="bounded")
    return math.sqrt(float(best.fun))


def _rms(residuals: np.ndarray, weights: np.ndarray) -> Optional[float]:
    if residuals.size == 0:
        return None
    return math.sqrt(weighted_mse(residuals, weights))


def _describe_weighting(cfg: FitConfig, n: int, used: int) -> str:
    if cfg.loss is Loss.GROUPED_LIKELIHOOD:
        text = "each rank counts once through the increment of its cell"
    else:
        text = f"richest {cfg.top_ranks} ranks weighted {cfg.top_weight:g}, others 1"
    if used < n:
        text += (
            f"; {used} of {n} points kept (top {cfg.max_points // 4} ranks in full, "
            "the rest spread over rank and log-income)"
        )
    return text


def _untied(names: List[Parameter], tie: bool) -> List[Parameter]:
    return [k for k in names if not (tie and k is Parameter.T1)]


def _m0_starts(values: Values, free: List[Parameter]) -> List[Values]:
    """The guess, then copies with m0 moved by the M0_STARTS factors."""
    starts = [values]
    if Parameter.M0 not in free:
        return starts
    for factor in M0_STARTS:
        m0 = values[Parameter.M0] * factor
        if m0 < values[Parameter.M1]:
            starts.append({**values, Parameter.M0: m0})
    return starts


def _run_stage(
    name: str,
    free: List[Parameter],
    points: _Points,
    starts: List[Values],
    budget: int,
    cfg: FitConfig,
    tie: bool,
) -> Tuple[Values, int]:
    values = starts[0]
    if not free or len(points) < MIN_POINTS or budget <= 0:
        logger.debug(f"Skipping {name} stage ({len(points)} points, free {free})")
        return values, 0
    if budget < (len(starts) + 1) * SCOUT_EVALS:
        starts = starts[:1]
    loss = _Loss(points, values, free, cfg.loss, tie)
    z = loss.encode(values)
    f0 = best = loss(z)
    if len(starts) > 1:
        for start in starts:
            result = _nelder_mead(
                loss, loss.encode(start), STAGE_STEP, SCOUT_EVALS, cfg.tolerance
            )
            if result.fun < best:
                z, best = result.x, float(result.fun)
    remaining = budget - loss.n_evals
    if remaining > 0:
        result = _nelder_mead(loss, z, STAGE_STEP, remaining, cfg.tolerance)
        if result.fun < best:
            z, best = result.x, float(result.fun)
    logger.debug(
        f"{name} stage on {len(points)} points from {len(starts)} start(s): "
        f"loss {f0:.4g} -> {best:.4g} in {loss.n_evals} evaluations"
    )
    return (loss.decode(z) if best < f0 else values), loss.n_evals


def _polish(
    points: _Points,
    values: Values,
    free: List[Parameter],
    budget: int,
    cfg: FitConfig,
    tie: bool,
) -> Tuple[Values, bool, int]:
    """Restarted joint simplex; returns (values, converged, evaluations)."""
    if budget < 1:
        return values, False, 0
    loss = _Loss(points, values, free, cfg.loss, tie)
    z = loss.encode(values)
    best = loss(z)
    converged = False
    step = POLISH_STEP
    for attempt in range(cfg.restarts + 1):
        remaining = budget - loss.n_evals
        if remaining <= 0:
            converged = False
            break
        result = _nelder_mead(loss, z, step, remaining, cfg.tolerance)
        improvement = best - float(result.fun)
        if result.fun < best:
            z, best = result.x, float(result.fun)
        converged = bool(result.success)
        logger.debug(
            f"Polish {attempt} ({'T1 = m1' if tie else 'T1 free'}): loss {best:.6g}, "
            f"improvement {improvement:.3g}, {loss.n_evals} evaluations"
        )
        if converged and improvement <= cfg.tolerance:
            break
        step *= POLISH_SHRINK
    return loss.decode(z), converged, loss.n_evals


def _t1_deviance(points: _Points, n: int, tied: Values, loose: Values) -> float:
    """Likelihood-ratio statistic of freeing T1 from its tie to m1."""
    try:
        with np.errstate(all="ignore"):
            gain = increment_divergence(
                points.incomes, points.exceedances, _shape(tied)
            ) - increment_divergence(points.incomes, points.exceedances, _shape(loose))
    except (IncomeFlowError, ValueError, ArithmeticError):
        return 0.0
    return 2.0 * (n + 1) * gain


def fit(
    c: CcdfCurve,
    cfg: FitConfig,
    year: Optional[int] = None,
    dataset: Optional[str] = None,
) -> FitReport:
    """Fit the structural parameters of the equilibrium law to `c`.

    Non-convergence is reported through `converged` and a flag, never raised.

    Raises:
        ConfigurationError: for curves with fewer than 10 points
    """
    if len(c) < MIN_POINTS:
        raise ConfigurationError(
            f"a curve of {len(c)} points is too short to fit (need {MIN_POINTS})"
        )
    keep = _distinct(c.incomes, _thin(c.incomes, cfg.max_points))
    points = _Points(
        c.incomes[keep],
        c.exceedances[keep],
        rank_weights(keep.size, cfg.top_ranks, cfg.top_weight),
    )

    guess = cfg.initial_guess
    values = {k: float(getattr(guess, k.value)) for k in Parameter}
    tie = Parameter.T1 in cfg.free_params and Parameter.M1 in cfg.free_params
    if tie:
        values[Parameter.T1] = values[Parameter.M1]
    evals = 0
    stage_budget = cfg.max_evals // 4

    low_free = _untied(cfg.free(LOW_STAGE), tie)
    values, spent = _run_stage(
        "low/medium",
        low_free,
        points.subset(points.incomes < values[Parameter.M1]),
        _m0_starts(values, low_free),
        stage_budget,
        cfg,
        tie,
    )
    evals += spent

    knee = math.sqrt(values[Parameter.M0] * values[Parameter.M1])
    values, spent = _run_stage(
        "high",
        _untied(cfg.free(HIGH_STAGE), tie),
        points.subset(points.incomes >= knee),
        [values],
        stage_budget,
        cfg,
        tie,
    )
    evals += spent

    flags = list(cfg.guess_flags)
    if tie:
        tied, tied_ok, spent = _polish(
            points,
            values,
            _untied(cfg.free(), True),
            (cfg.max_evals - evals) // 2,
            cfg,
            tie=True,
        )
        evals += spent
        loose, loose_ok, spent = _polish(
            points, tied, cfg.free(), cfg.max_evals - evals, cfg, tie=False
        )
        evals += spent
        deviance = _t1_deviance(points, c.n, tied, loose)
        if deviance > T1_DEVIANCE:
            values, converged = loose, loose_ok
        else:
            values, converged = tied, tied_ok
            flags.append(FLAG_T1_TIED)
        logger.debug(
            f"Freeing T1 lowers the deviance by {deviance:.3g} "
            f"(threshold {T1_DEVIANCE}); T1 tied: {FLAG_T1_TIED in flags}"
        )
    else:
        values, converged, spent = _polish(
            points, values, cfg.free(), cfg.max_evals - evals, cfg, tie=False
        )
        evals += spent

    params = normalize(_shape(values))
    log_q = np.log10(points.exceedances)
    residuals = log_q - log10_ccdf(points.incomes, params)
    below = points.incomes < params.m1
    n_tail = int(np.sum(c.incomes >= params.m1))
    rms = math.sqrt(weighted_mse(residuals, points.weights))

    if not converged:
        flags.append(FLAG_NOT_CONVERGED)
    if params.m0 > c.incomes[0]:
        flags.append(FLAG_M0_ABOVE_DATA)
    if n_tail < MIN_TAIL_POINTS:
        flags.append(FLAG_FEW_TAIL_POINTS)
    if _exponential_rms(points.incomes, log_q, points.weights) <= 1.5 * rms + 0.01:
        flags.append(FLAG_EXPONENTIAL)

    report = FitReport(
        params=params,
        residual_rms=rms,
        residual_low=_rms(residuals[below], points.weights[below]),
        residual_high=_rms(residuals[~below], points.weights[~below]),
        n_points_used=len(points),
        n_tail_points=n_tail,
        converged=converged,
        n_evals=evals,
        flags=flags,
        loss=cfg.loss,
        weighting=_describe_weighting(cfg, len(c), len(points)),
        year=year,
        dataset=dataset,
    )
    summary = ", ".join(f"{k.value}={getattr(params, k.value):.5g}" for k in Parameter)
    if converged:
        logger.info(
            f"Fit converged after {evals} evaluations: {summary}, rms {rms:.4g}"
        )
    else:
        logger.warning(
            f"Fit did not converge within {cfg.max_evals} evaluations: {summary}"
        )
    quiet = {FLAG_NOT_CONVERGED, FLAG_T1_TIED, *cfg.guess_flags}
    if any(flag not in quiet for flag in flags):
        logger.warning(f"Fit flags: {', '.join(flags)}")
    return report


def default_fit_config(c: CcdfCurve, **overrides) -> FitConfig:
    """FitConfig whose initial guess comes from the curve itself.

    m0 and m1 are the knees of crossover_guess, alpha and alpha1 minus the
    slopes of the middle and last segments, T = median / ln 2 from the
    Boltzmann-Gibbs head and T1 = m1. `fit` also scouts m0 starts
    up to eight times this knee.

    Raises:
        ConfigurationError: for curves with fewer than 100 points
    """
    guess = crossover_guess(c)
    alpha1 = float(np.clip(-guess.slopes[2], 0.1, 20.0))
    alpha = float(np.clip(-guess.slopes[1], 0.2, 30.0))
    if alpha1 >= alpha:
        alpha = alpha1 + 0.5
    shape = EyShape(
        T=float(np.median(c.incomes)) / math.log(2.0),
        T1=guess.m1,
        m0=guess.m0,
        m1=guess.m1,
        alpha=alpha,
        alpha1=alpha1,
    )
    flags = (FLAG_LOW_CONFIDENCE,) if guess.low_confidence else ()
    return FitConfig(initial_guess=shape, guess_flags=flags, **overrides)
