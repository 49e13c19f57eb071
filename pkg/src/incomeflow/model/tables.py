"""Published fits of the equilibrium law to EU household incomes, 2005-2010.

Two datasets per year: the survey alone and the survey matched with the
scaled rich-list incomes. Uncertainties are the quoted ones.
"""

from enum import Enum
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict

from incomeflow.model.params import EyShape


class Dataset(str, Enum):
    SURVEY_ONLY = "survey"
    MATCHED = "matched"


class PublishedRow(BaseModel):
    """One year's published parameters with their quoted uncertainties."""

    model_config = ConfigDict(frozen=True)

    year: int
    dataset: Dataset
    params: EyShape
    errors: Dict[str, float]


# year: (T, T1, m0, m1, alpha, alpha1), (dalpha, dalpha1)
_SURVEY: Dict[int, Tuple[Tuple[float, ...], Tuple[float, float]]] = {
    2005: ((36_000, 390_000, 160_000, 390_000, 3.216, 1.54), (0.002, 0.02)),
    2006: ((37_000, 330_000, 150_000, 330_000, 3.094, 2.15), (0.003, 0.02)),
    2007: ((37_000, 325_000, 160_000, 325_000, 3.057, 2.32), (0.003, 0.01)),
    2008: ((38_000, 320_000, 120_000, 320_000, 3.0632, 2.13), (0.0005, 0.02)),
    2009: ((37_000, 290_000, 145_000, 290_000, 2.979, 2.750), (0.001, 0.005)),
    2010: ((38_000, 320_000, 140_000, 320_000, 3.329, 2.43), (0.001, 0.01)),
}
_MATCHED: Dict[int, Tuple[Tuple[float, ...], Tuple[float, float]]] = {
    2005: ((36_000, 430_000, 155_000, 430_000, 2.907, 0.795), (0.003, 0.009)),
    2006: ((37_000, 445_000, 145_000, 445_000, 2.892, 0.86), (0.004, 0.01)),
    2007: ((37_000, 480_000, 160_000, 480_000, 2.735, 0.79), (0.004, 0.01)),
    2008: ((38_000, 450_000, 120_000, 450_000, 2.965, 0.890), (0.001, 0.007)),
    2009: ((37_000, 290_000, 145_000, 290_000, 2.974, 2.608), (0.001, 0.006)),
    2010: ((38_000, 450_000, 135_000, 450_000, 3.153, 0.77), (0.002, 0.01)),
}
_FIELDS = ("T", "T1", "m0", "m1", "alpha", "alpha1")


def _rows(dataset: Dataset, table) -> List[PublishedRow]:
    rows = []
    for year, (values, (d_alpha, d_alpha1)) in sorted(table.items()):
        rows.append(
            PublishedRow(
                year=year,
                dataset=dataset,
                params=EyShape(**dict(zip(_FIELDS, values))),
                errors={
                    "T": 3_000.0,
                    "T1": 50_000.0,
                    "m0": 20_000.0,
                    "m1": 50_000.0,
                    "alpha": d_alpha,
                    "alpha1": d_alpha1,
                },
            )
        )
    return rows


PUBLISHED_ROWS: List[PublishedRow] = _rows(Dataset.SURVEY_ONLY, _SURVEY) + _rows(
    Dataset.MATCHED, _MATCHED
)


def published(year: int, dataset: Dataset | str = Dataset.MATCHED) -> EyShape:
    """Published parameters of one year and dataset.

    Raises:
        KeyError: if no such row exists
    """
    dataset = Dataset(dataset)
    for row in PUBLISHED_ROWS:
        if row.year == year and row.dataset is dataset:
            return row.params
    raise KeyError(f"no published {dataset.value} row for {year}")
