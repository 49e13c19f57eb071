"""Income records and empirical CCDF curves."""

from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class IncomeSource(str, Enum):
    """Where an income record comes from."""

    SURVEY = "Survey"
    RICH_LIST = "RichList"


SOURCE_CODES: Dict[IncomeSource, int] = {
    IncomeSource.SURVEY: 0,
    IncomeSource.RICH_LIST: 1,
}
SOURCES_BY_CODE: Dict[int, IncomeSource] = {v: k for k, v in SOURCE_CODES.items()}


class IncomeRecord(BaseModel):
    """One household income."""

    model_config = ConfigDict(frozen=True)

    income: float = Field(gt=0, description="annual gross income (EUR/year)")
    source: IncomeSource
    year: int


class IncomeSample(BaseModel):
    """A set of household incomes, column-stored.

    Attributes:
        incomes: annual incomes (EUR/year), all > 0
        sources: source code per record (see SOURCE_CODES)
        years: calendar year per record
        metadata: free-form provenance
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    incomes: np.ndarray
    sources: np.ndarray
    years: np.ndarray
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("incomes", mode="before")
    @classmethod
    def as_float_array(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype=float).ravel()

    @field_validator("sources", "years", mode="before")
    @classmethod
    def as_int_array(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype=np.int64).ravel()

    @model_validator(mode="after")
    def check_records(self) -> "IncomeSample":
        n = self.incomes.size
        if self.sources.size != n or self.years.size != n:
            raise ValueError(
                f"column lengths differ: {n} incomes, {self.sources.size} sources, "
                f"{self.years.size} years"
            )
        bad = ~(np.isfinite(self.incomes) & (self.incomes > 0))
        if np.any(bad):
            raise ValueError(
                f"{int(bad.sum())} incomes are not positive finite numbers "
                f"(first at index {int(np.argmax(bad))})"
            )
        if not np.all(np.isin(self.sources, list(SOURCES_BY_CODE))):
            raise ValueError("unknown source code")
        return self

    @classmethod
    def from_incomes(
        cls,
        incomes: Iterable[float],
        source: IncomeSource = IncomeSource.SURVEY,
        year: int = 0,
        metadata: Optional[Dict[str, Any]] = None,
    ) -> "IncomeSample":
        """Sample whose records share one source and one year."""
        if not isinstance(incomes, np.ndarray):
            incomes = list(incomes)
        values = np.asarray(incomes, dtype=float)
        return cls(
            incomes=values,
            sources=np.full(values.size, SOURCE_CODES[IncomeSource(source)]),
            years=np.full(values.size, year),
            metadata=dict(metadata or {}),
        )

    @classmethod
    def from_records(
        cls, records: Iterable[IncomeRecord], metadata: Optional[Dict[str, Any]] = None
    ) -> "IncomeSample":
        rows = list(records)
        return cls(
            incomes=[r.income for r in rows],
            sources=[SOURCE_CODES[r.source] for r in rows],
            years=[r.year for r in rows],
            metadata=dict(metadata or {}),
        )

    @classmethod
    def concat(
        cls, *samples: "IncomeSample", metadata: Optional[Dict[str, Any]] = None
    ) -> "IncomeSample":
        """Records of all samples, in argument order."""
        if metadata is None:
            metadata = {}
            for s in samples:
                metadata.update(s.metadata)
        return cls(
            incomes=np.concatenate([s.incomes for s in samples]) if samples else [],
            sources=np.concatenate([s.sources for s in samples]) if samples else [],
            years=np.concatenate([s.years for s in samples]) if samples else [],
            metadata=metadata,
        )

    def __len__(self) -> int:
        return int(self.incomes.size)

    @property
    def records(self) -> List[IncomeRecord]:
        return list(self.iter_records())

    def iter_records(self) -> Iterator[IncomeRecord]:
        for income, code, year in zip(self.incomes, self.sources, self.years):
            yield IncomeRecord(
                income=float(income), source=SOURCES_BY_CODE[int(code)], year=int(year)
            )

    def mask(self, source: IncomeSource) -> np.ndarray:
        return self.sources == SOURCE_CODES[IncomeSource(source)]

    def select(self, source: IncomeSource) -> "IncomeSample":
        """The records of one source."""
        keep = self.mask(source)
        return IncomeSample(
            incomes=self.incomes[keep],
            sources=self.sources[keep],
            years=self.years[keep],
            metadata=dict(self.metadata),
        )

    def source_counts(self) -> Dict[str, int]:
        return {source.value: int(self.mask(source).sum()) for source in IncomeSource}

    def scaled(self, factor: float) -> "IncomeSample":
        """Same records with every income multiplied by `factor`."""
        return IncomeSample(
            incomes=self.incomes * factor,
            sources=self.sources.copy(),
            years=self.years.copy(),
            metadata=dict(self.metadata),
        )


class CcdfCurve(BaseModel):
    """Weibull plotting positions of a sample, richest record first.

    Attributes:
        incomes: descending incomes (EUR/year)
        exceedances: l/(n+1) for rank l = 1..n, strictly increasing
        n: number of underlying records
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    incomes: np.ndarray
    exceedances: np.ndarray
    n: int = Field(ge=1)

    @field_validator("incomes", "exceedances", mode="before")
    @classmethod
    def as_float_array(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype=float).ravel()

    @model_validator(mode="after")
    def check_points(self) -> "CcdfCurve":
        if self.incomes.size != self.exceedances.size or self.incomes.size == 0:
            raise ValueError("a curve needs equally many incomes and exceedances (>0)")
        if np.any(np.diff(self.incomes) > 0):
            raise ValueError("incomes must be ordered descending")
        q = self.exceedances
        if np.any(q <= 0) or np.any(q >= 1) or np.any(np.diff(q) <= 0):
            raise ValueError("exceedances must lie in (0, 1) and increase strictly")
        return self

    def __len__(self) -> int:
        return int(self.incomes.size)

    @property
    def points(self) -> List[tuple]:
        return list(zip(self.incomes.tolist(), self.exceedances.tolist()))

    def ascending(self) -> "tuple[np.ndarray, np.ndarray]":
        """(incomes, exceedances) ordered by increasing income."""
        return self.incomes[::-1], self.exceedances[::-1]
