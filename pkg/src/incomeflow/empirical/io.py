"""
CSV and TSV files of incomes and CCDF curves.

Income CSV: comma-separated, UTF-8, header `income,source,year`. Curve TSV:
tab-separated with header `income<TAB>exceedance`, richest record first.
Malformed rows abort the read with their 1-based file line numbers.
"""

from pathlib import Path
from typing import Iterable, List

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import ValidationError

from incomeflow.empirical.models import (
    SOURCE_CODES,
    SOURCES_BY_CODE,
    CcdfCurve,
    IncomeSample,
    IncomeSource,
)
from incomeflow.errors import DataFormatError, EmptySampleError

logger = logger.bind(component="empirical")

INCOME_COLUMNS = ["income", "source", "year"]
CURVE_COLUMNS = ["income", "exceedance"]
SOURCE_NAMES = [source.value for source in IncomeSource]


def line_numbers(bad: pd.Series) -> List[int]:
    # header is line 1
    return [int(i) + 2 for i in np.flatnonzero(bad.to_numpy())]


def read_table(
    path: Path | str, columns: Iterable[str], sep: str = ","
) -> pd.DataFrame:
    """Read a delimited file as strings, checking the header.

    Raises:
        DataFormatError: for a missing or empty file, a bad header or a row
            with the wrong number of fields
        EmptySampleError: for a file holding only the header
    """
    path = Path(path)
    columns = list(columns)
    if not path.is_file():
        raise DataFormatError("no such file", path)
    try:
        frame = pd.read_csv(
            path,
            sep=sep,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError as e:
        raise DataFormatError("file is empty", path) from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataFormatError(f"cannot parse file: {e}", path) from e

    frame.columns = [str(name).strip() for name in frame.columns]
    missing = [name for name in columns if name not in frame.columns]
    if missing:
        raise DataFormatError(
            f"missing column(s) {', '.join(missing)}; expected header "
            f"{sep.join(columns)!r}",
            path,
        )
    if frame.empty:
        raise EmptySampleError(f"{path}: no records after the header")
    return frame[columns]


def to_float(text: object) -> float:
    try:
        return float(str(text).strip())
    except ValueError:
        return np.nan


def positive_numbers(column: pd.Series) -> "tuple[pd.Series, pd.Series]":
    # float() is correctly rounded, so written values read back exactly
    values = column.map(to_float).astype(float)
    bad = values.isna() | ~np.isfinite(values) | (values <= 0)
    return values, bad


def read_income_csv(path: Path | str) -> IncomeSample:
    """Parse an income CSV into an IncomeSample.

    Raises:
        DataFormatError: naming every malformed line
        EmptySampleError: if the file has a header but no records
    """
    frame = read_table(path, INCOME_COLUMNS)
    incomes, bad_income = positive_numbers(frame["income"])
    names = frame["source"].str.strip()
    bad_source = ~names.isin(SOURCE_NAMES)
    years = frame["year"].map(to_float).astype(float)
    bad_year = years.isna() | (years != years.round())

    bad = bad_income | bad_source | bad_year
    if bad.any():
        reasons = [
            label
            for label, mask in (
                ("income must be a positive number", bad_income),
                (f"source must be one of {SOURCE_NAMES}", bad_source),
                ("year must be an integer", bad_year),
            )
            if mask.any()
        ]
        raise DataFormatError(
            "malformed record(s): " + "; ".join(reasons), path, line_numbers(bad)
        )

    sample = IncomeSample(
        incomes=incomes.to_numpy(dtype=float),
        sources=names.map(lambda name: SOURCE_CODES[IncomeSource(name)]).to_numpy(),
        years=years.to_numpy(dtype=np.int64),
        metadata={"input": str(path)},
    )
    logger.info(f"Read {len(sample)} income records from {path}")
    return sample


def write_income_csv(sample: IncomeSample, path: Path | str) -> Path:
    """Write `income,source,year` rows; floats keep full precision."""
    path = Path(path)
    frame = pd.DataFrame(
        {
            "income": sample.incomes,
            "source": [SOURCES_BY_CODE[int(code)].value for code in sample.sources],
            "year": sample.years,
        }
    )
    frame.to_csv(path, index=False, encoding="utf-8")
    logger.debug(f"Wrote {len(sample)} income records to {path}")
    return path


def read_curve_tsv(path: Path | str) -> CcdfCurve:
    """Parse a curve TSV written by `write_curve_tsv`.

    Raises:
        DataFormatError: for malformed lines or points out of rank order
        EmptySampleError: if the file has a header but no points
    """
    frame = read_table(path, CURVE_COLUMNS, sep="\t")
    incomes, bad_income = positive_numbers(frame["income"])
    exceedances, bad_q = positive_numbers(frame["exceedance"])
    bad = bad_income | bad_q | (exceedances >= 1)
    if bad.any():
        raise DataFormatError(
            "malformed point(s): need positive income and exceedance in (0, 1)",
            path,
            line_numbers(bad),
        )
    try:
        return CcdfCurve(
            incomes=incomes.to_numpy(dtype=float),
            exceedances=exceedances.to_numpy(dtype=float),
            n=len(frame),
        )
    except ValidationError as e:
        raise DataFormatError(
            f"points are not a CCDF in rank order: {e.errors()[0]['msg']}", path
        ) from e


def write_curve_tsv(curve: CcdfCurve, path: Path | str) -> Path:
    """Write `income<TAB>exceedance`, richest first, at full precision."""
    path = Path(path)
    frame = pd.DataFrame({"income": curve.incomes, "exceedance": curve.exceedances})
    frame.to_csv(path, sep="\t", index=False, encoding="utf-8")
    logger.debug(f"Wrote {len(curve)} curve points to {path}")
    return path
