"""Survey and rich-list matching."""

from incomeflow.matching.io import read_wealth_csv
from incomeflow.matching.models import MatchResult, WealthRecord
from incomeflow.matching.service import (
    estimate_incomes,
    find_factor,
    junction_gap,
    match_years,
    merge,
)

__all__ = [
    "MatchResult",
    "WealthRecord",
    "estimate_incomes",
    "find_factor",
    "junction_gap",
    "match_years",
    "merge",
    "read_wealth_csv",
]
