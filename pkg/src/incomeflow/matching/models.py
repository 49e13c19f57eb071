"""Types of the survey/rich-list matching step."""

from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config.env import NUMERICS
from incomeflow.empirical.models import IncomeSample


class WealthRecord(BaseModel):
    """Net worth of one rich-list entry in one year."""

    model_config = ConfigDict(frozen=True)

    person_id: str = Field(min_length=1)
    year: int
    wealth: float = Field(gt=0, description="net worth (EUR)")

    @field_validator("person_id", mode="before")
    @classmethod
    def as_identifier(cls, v: Any) -> str:
        return str(v).strip()


class MatchResult(BaseModel):
    """Outcome of `find_factor`.

    Attributes:
        factor: scale applied to the rich-list incomes
        merged: survey records plus the scaled rich-list records
        overlap_diagnostic: RMS log10-exceedance difference of the two
            segments over their overlap window
        junction_gap: log10 income jump of the merged curve at the largest
            survey income (decades)
        year: calendar year, when matched per year
    """

    model_config = ConfigDict(frozen=True)

    factor: float = Field(gt=0)
    merged: IncomeSample
    overlap_diagnostic: float = Field(ge=0)
    junction_gap: float = Field(ge=0)
    year: Optional[int] = None

    @property
    def gap_closed(self) -> bool:
        return self.junction_gap < NUMERICS.GAP_TOLERANCE

    def summary(self) -> Dict[str, Any]:
        """JSON-ready summary: factor, diagnostics and record counts per source."""
        return {
            "year": self.year,
            "factor": self.factor,
            "overlap_diagnostic": self.overlap_diagnostic,
            "junction_gap": self.junction_gap,
            "gap_tolerance": NUMERICS.GAP_TOLERANCE,
            "counts": self.merged.source_counts(),
        }
