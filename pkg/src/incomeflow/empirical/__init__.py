"""Empirical CCDFs of income records."""

# models first: incomeflow.model.sampling imports it while this package loads
from incomeflow.empirical.models import (
    SOURCE_CODES,
    CcdfCurve,
    IncomeRecord,
    IncomeSample,
    IncomeSource,
)
from incomeflow.empirical.ccdf import build_ccdf, loglog_points, max_deviation
from incomeflow.empirical.io import (
    read_curve_tsv,
    read_income_csv,
    write_curve_tsv,
    write_income_csv,
)

__all__ = [
    "SOURCE_CODES",
    "CcdfCurve",
    "IncomeRecord",
    "IncomeSample",
    "IncomeSource",
    "build_ccdf",
    "loglog_points",
    "max_deviation",
    "read_curve_tsv",
    "read_income_csv",
    "write_curve_tsv",
    "write_income_csv",
]
