"""Reference curves and tabular summaries of fit results."""

from typing import Iterable, List, Optional

import numpy as np
import pandas as pd
from pydantic import ValidationError

from incomeflow.empirical.models import CcdfCurve
from incomeflow.errors import ParameterError
from incomeflow.fitting.models import PARAMETER_ORDER, FitReport
from incomeflow.model.distribution import ccdf_eq, isf
from incomeflow.model.params import EyShape
from incomeflow.model.tables import Dataset, published

TABLE_COLUMNS = ["Year", "T", "T1", "m0", "m1", "alpha", "alpha1", "residual"]
COMPARISON_COLUMNS = [
    "year",
    "dataset",
    "parameter",
    "fitted",
    "published",
    "relative_difference",
]


def noise_free_curve(p: EyShape, n: int) -> CcdfCurve:
    """The curve an infinitely lucky sample of n draws would produce.

    Rank l sits at the income whose model exceedance is exactly l/(n+1).
    """
    if n < 1:
        raise ParameterError(f"a curve needs at least one point, got n={n}")
    q = np.arange(1, n + 1) / (n + 1)
    return CcdfCurve(incomes=isf(q, p), exceedances=q, n=n)


def grid_curve(p: EyShape, incomes: Iterable[float]) -> CcdfCurve:
    """Model exceedances at given incomes, shaped as an empirical curve.

    Raises:
        ParameterError: if the incomes are not positive or their exceedances
            do not form a valid curve (repeated or underflowing values)
    """
    m = np.sort(np.unique(np.asarray(list(incomes), dtype=float)))[::-1]
    if m.size == 0 or np.any(m <= 0):
        raise ParameterError("grid incomes must be positive")
    q = np.asarray(ccdf_eq(m, p), dtype=float)
    try:
        return CcdfCurve(incomes=m, exceedances=q, n=m.size)
    except ValidationError as exc:
        raise ParameterError(f"grid does not give a valid curve: {exc}") from exc


def overlay_frame(c: CcdfCurve, p: EyShape) -> pd.DataFrame:
    """Empirical and model exceedance at every point of `c`."""
    return pd.DataFrame(
        {
            "income": c.incomes,
            "empirical": c.exceedances,
            "model": np.asarray(ccdf_eq(c.incomes, p), dtype=float),
        }
    )


def parameter_frame(reports: Iterable[FitReport]) -> pd.DataFrame:
    rows = []
    for report in reports:
        row = {"Year": report.year if report.year is not None else ""}
        for name in PARAMETER_ORDER:
            row[name.value] = getattr(report.params, name.value)
        row["residual"] = report.residual_rms
        rows.append(row)
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def format_parameter_table(reports: Iterable[FitReport]) -> str:
    """Fitted parameters one row per report, laid out like the published tables."""
    frame = parameter_frame(reports)
    formatters = {
        "T": "{:,.0f}".format,
        "T1": "{:,.0f}".format,
        "m0": "{:,.0f}".format,
        "m1": "{:,.0f}".format,
        "alpha": "{:.3f}".format,
        "alpha1": "{:.3f}".format,
        "residual": "{:.4f}".format,
    }
    return frame.to_string(index=False, formatters=formatters)


def published_comparison(
    reports: Iterable[FitReport], dataset: Optional[Dataset | str] = None
) -> pd.DataFrame:
    """Fitted against published values, one row per (year, parameter).

    Reports without a year or without a matching published row are skipped.
    The dataset defaults to each report's own `dataset` label, then MATCHED.
    """
    rows: List[dict] = []
    for report in reports:
        if report.year is None:
            continue
        which = dataset or report.dataset or Dataset.MATCHED
        try:
            reference = published(report.year, which)
        except (KeyError, ValueError):
            continue
        for name in PARAMETER_ORDER:
            fitted = getattr(report.params, name.value)
            expected = getattr(reference, name.value)
            rows.append(
                {
                    "year": report.year,
                    "dataset": Dataset(which).value,
                    "parameter": name.value,
                    "fitted": fitted,
                    "published": expected,
                    "relative_difference": (fitted - expected) / expected,
                }
            )
    return pd.DataFrame(
        rows,
        columns=COMPARISON_COLUMNS,
    )
