"""Rich-list wealth CSV: header `person_id,year,wealth_eur`."""

from pathlib import Path
from typing import List

import pandas as pd
from loguru import logger

from incomeflow.empirical.io import line_numbers, positive_numbers, read_table, to_float
from incomeflow.errors import DataFormatError
from incomeflow.matching.models import WealthRecord

logger = logger.bind(component="matching")

WEALTH_COLUMNS = ["person_id", "year", "wealth_eur"]


def read_wealth_csv(path: Path | str) -> List[WealthRecord]:
    """Parse a wealth CSV (amounts already in EUR).

    Raises:
        DataFormatError: for malformed lines or repeated (person_id, year)
        EmptySampleError: if the file has a header but no rows
    """
    frame = read_table(path, WEALTH_COLUMNS)
    ids = frame["person_id"].str.strip()
    years = frame["year"].map(to_float).astype(float)
    wealth, bad_wealth = positive_numbers(frame["wealth_eur"])
    bad_year = years.isna() | (years != years.round())
    bad = (ids == "") | ids.isna() | bad_year | bad_wealth
    if bad.any():
        raise DataFormatError(
            "malformed row(s): need a person_id, an integer year and wealth_eur > 0",
            path,
            line_numbers(bad),
        )

    repeated = pd.DataFrame({"id": ids, "year": years}).duplicated(keep="first")
    if repeated.any():
        raise DataFormatError(
            "repeated (person_id, year)", path, line_numbers(repeated)
        )

    records = [
        WealthRecord(person_id=p, year=int(y), wealth=float(v))
        for p, y, v in zip(ids, years, wealth)
    ]
    logger.info(
        f"Read {len(records)} wealth records for {ids.nunique()} entries from {path}"
    )
    return records
