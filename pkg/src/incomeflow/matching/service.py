"""
Matching of a rich list to survey incomes.

Rich-list incomes are positive year-over-year wealth differences. They lie
orders of magnitude above the survey, so the two CCDF segments are separated
by a horizontal gap; a common factor s moves the rich segment onto the top of
the survey segment.

The factor minimises the mean squared log10-exceedance difference of the two
segments on a common log-income grid over their overlap window. The rich
segment is ranked as if its entries were survey households, so the rich
point of rank l sits at l/(n_survey + 1).
"""

from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize_scalar

from config.env import NUMERICS
from incomeflow.empirical.models import SOURCE_CODES, IncomeSample, IncomeSource
from incomeflow.errors import (
    ConfigurationError,
    DataFormatError,
    EmptySampleError,
    MatchingError,
)
from incomeflow.matching.models import MatchResult, WealthRecord

logger = logger.bind(component="matching")

FACTOR_BOUNDS = (1e-6, 1.0)
SCAN_POINTS = 241
GRID_POINTS = 200
# objective offset where the segments do not overlap
NO_OVERLAP = 10.0


def estimate_incomes(
    w: Iterable[WealthRecord], year: int, kappa: float = 1.0
) -> IncomeSample:
    """Rich-list incomes kappa * (wealth[year] - wealth[year - 1]).

    Only entries present in both years with a positive difference are kept,
    ordered by person_id.

    Raises:
        ConfigurationError: if kappa <= 0
        DataFormatError: if a (person_id, year) pair occurs twice
        EmptySampleError: if either year has no records or nobody qualifies
    """
    if kappa <= 0:
        raise ConfigurationError(f"kappa={kappa} must be positive")
    frame = pd.DataFrame(
        [(r.person_id, r.year, r.wealth) for r in w],
        columns=["person_id", "year", "wealth"],
    )
    duplicated = frame.duplicated(["person_id", "year"])
    if duplicated.any():
        pairs = frame.loc[duplicated, ["person_id", "year"]].head(5)
        raise DataFormatError(
            "duplicate (person_id, year) pairs: "
            + ", ".join(f"({p}, {y})" for p, y in pairs.itertuples(index=False))
        )

    for needed in (year - 1, year):
        if not (frame["year"] == needed).any():
            raise EmptySampleError(f"no wealth records for year {needed}")

    before = frame[frame["year"] == year - 1].set_index("person_id")["wealth"]
    after = frame[frame["year"] == year].set_index("person_id")["wealth"]
    differences = (after - before).dropna().sort_index()
    gained = differences[differences > 0]
    logger.debug(
        f"Year {year}: {len(differences)} entries in both years, "
        f"{len(gained)} with a wealth gain"
    )
    if gained.empty:
        raise EmptySampleError(f"no rich-list entry gained wealth in {year}")

    return IncomeSample.from_incomes(
        kappa * gained.to_numpy(dtype=float),
        source=IncomeSource.RICH_LIST,
        year=year,
        metadata={
            "year": year,
            "kappa": kappa,
            "pairs": int(len(differences)),
            "excluded": int(len(differences) - len(gained)),
        },
    )


class _Segment:
    """Monotone interpolant of a CCDF segment in log10-log10 coordinates."""

    def __init__(self, incomes: np.ndarray, n_ranked: int, what: str):
        if incomes.size == 0:
            raise EmptySampleError(f"the {what} sample is empty")
        ordered = np.sort(incomes)[::-1]
        exceedance = np.arange(1, ordered.size + 1) / (n_ranked + 1.0)
        # ties share the mean of their ranks
        series = (
            pd.Series(np.log10(exceedance), index=np.log10(ordered))
            .groupby(level=0)
            .mean()
        )
        if series.size < 2:
            raise MatchingError(
                f"the {what} sample needs at least two distinct incomes"
            )
        self.x = series.index.to_numpy(dtype=float)
        self.y = series.to_numpy(dtype=float)
        self._interp = PchipInterpolator(self.x, self.y)

    def __call__(self, x: np.ndarray, shift: float = 0.0) -> np.ndarray:
        return self._interp(x - shift)


def _overlap_mse(survey: _Segment, rich: _Segment, shift: float) -> float:
    """Mean squared log10-exceedance gap with the rich segment shifted by `shift`."""
    lo = max(survey.x[0], rich.x[0] + shift)
    hi = min(survey.x[-1], rich.x[-1] + shift)
    if hi <= lo:
        return NO_OVERLAP + (lo - hi) ** 2
    grid = np.linspace(lo, hi, GRID_POINTS)
    diff = survey(grid) - rich(grid, shift)
    return float(np.mean(diff * diff))


def junction_gap(survey: IncomeSample, rich_scaled: IncomeSample) -> float:
    """log10 of (smallest rich income >= largest survey income) / largest survey income.

    Zero when no rich income lies above the survey.
    """
    if len(survey) == 0:
        raise EmptySampleError("the survey sample is empty")
    top = float(survey.incomes.max())
    above = rich_scaled.incomes[rich_scaled.incomes >= top]
    if above.size == 0:
        return 0.0
    return float(np.log10(above.min() / top))


def merge(survey: IncomeSample, rich_scaled: IncomeSample) -> IncomeSample:
    """Survey records followed by the rich-list records.

    Raises:
        ConfigurationError: if a record carries the wrong source tag
    """
    if not np.all(survey.mask(IncomeSource.SURVEY)):
        raise ConfigurationError("survey sample holds non-survey records")
    if not np.all(rich_scaled.mask(IncomeSource.RICH_LIST)):
        raise ConfigurationError("rich sample holds non-rich-list records")
    return IncomeSample.concat(
        survey,
        rich_scaled,
        metadata={**survey.metadata, **rich_scaled.metadata},
    )


def find_factor(
    survey: IncomeSample,
    rich: IncomeSample,
    bounds: Tuple[float, float] = FACTOR_BOUNDS,
    year: Optional[int] = None,
) -> MatchResult:
    """Scale factor that lays the rich segment over the survey's top tail.

    A scan over log10 s locates the basin; a bounded Brent search refines it.

    Args:
        survey: survey records
        rich: rich-list incomes before scaling (relabelled RichList)
        bounds: search interval for s
        year: label carried into the result

    Raises:
        EmptySampleError: if either sample is empty
        MatchingError: if no factor within `bounds` makes the segments overlap
    """
    lo, hi = bounds
    if not 0 < lo < hi:
        raise ConfigurationError(
            f"factor bounds {bounds} are not an interval in (0, inf)"
        )

    n_survey = len(survey)
    survey_curve = _Segment(survey.incomes, n_survey, "survey")
    rich_curve = _Segment(rich.incomes, n_survey, "rich")

    shifts = np.linspace(np.log10(lo), np.log10(hi), SCAN_POINTS)
    values = np.array([_overlap_mse(survey_curve, rich_curve, t) for t in shifts])
    best = int(np.argmin(values))
    if values[best] >= NO_OVERLAP:
        raise MatchingError(
            f"rich segment [{rich.incomes.min():.3g}, {rich.incomes.max():.3g}] "
            f"cannot overlap survey [{survey.incomes.min():.3g}, "
            f"{survey.incomes.max():.3g}] for factors in [{lo:g}, {hi:g}]"
        )

    shift, value = float(shifts[best]), float(values[best])
    step = shifts[1] - shifts[0]
    refined = minimize_scalar(
        lambda t: _overlap_mse(survey_curve, rich_curve, t),
        bounds=(max(shifts[0], shift - step), min(shifts[-1], shift + step)),
        method="bounded",
        options={"xatol": 1e-7},
    )
    if refined.fun < value:
        shift, value = float(refined.x), float(refined.fun)

    factor = 10.0**shift
    scaled = IncomeSample(
        incomes=rich.incomes * factor,
        sources=np.full(len(rich), SOURCE_CODES[IncomeSource.RICH_LIST]),
        years=rich.years,
        metadata=dict(rich.metadata),
    )
    result = MatchResult(
        factor=factor,
        merged=merge(survey, scaled),
        overlap_diagnostic=float(np.sqrt(value)),
        junction_gap=junction_gap(survey, scaled),
        year=year,
    )
    logger.info(
        f"Matched {len(rich)} rich-list incomes to {n_survey} survey incomes: "
        f"factor {factor:.3g}, overlap RMS {result.overlap_diagnostic:.3g}, "
        f"junction gap {result.junction_gap:.3f} decades"
    )
    if not result.gap_closed:
        logger.warning(
            f"Junction gap {result.junction_gap:.3f} decades exceeds "
            f"{NUMERICS.GAP_TOLERANCE} after matching"
        )
    return result


def match_years(
    survey_by_year: Mapping[int, IncomeSample],
    wealth: Iterable[WealthRecord],
    years: Iterable[int],
    kappa: float = 1.0,
) -> Dict[int, MatchResult]:
    """Independent per-year matches; the factors are reported, not constrained.

    Raises:
        ConfigurationError: if a requested year has no survey sample
    """
    records: List[WealthRecord] = list(wealth)
    results: Dict[int, MatchResult] = {}
    for year in years:
        if year not in survey_by_year:
            raise ConfigurationError(f"no survey sample for year {year}")
        rich = estimate_incomes(records, year, kappa)
        results[year] = find_factor(survey_by_year[year], rich, year=year)
    logger.info(
        "Factors per year: "
        + ", ".join(f"{y}: {r.factor:.3g}" for y, r in sorted(results.items()))
    )
    return results
