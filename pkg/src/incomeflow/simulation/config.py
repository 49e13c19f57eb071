"""Run configuration and result types of the Langevin ensemble."""

from enum import Enum
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from incomeflow.errors import StabilityError
from incomeflow.model import Dataset, LangevinParams, published, to_langevin

# dt * max(|a|, |a'|, b) must stay below this
STABILITY_LIMIT = 0.1


class Boundary(str, Enum):
    """Treatment of excursions below zero income."""

    REFLECT_AT_ZERO = "ReflectAtZero"


class SimConfig(BaseModel):
    """An ensemble run of the threshold Langevin dynamics.

    Attributes:
        lp: drift and diffusion coefficients
        n_agents: number of independent households
        dt: Euler-Maruyama time step (years)
        t_burn: burn-in time before recording (years)
        t_sample: recording horizon after burn-in (years)
        seed: root of the per-agent random streams
        boundary: behaviour at zero income
        initial_income: starting income of every agent; defaults to B0/A0
        record_stride: steps between recorded states
        n_bins: number of histogram bins
    """

    model_config = ConfigDict(frozen=True)

    lp: LangevinParams
    n_agents: int = Field(ge=1)
    dt: float = Field(gt=0)
    t_burn: float = Field(gt=0)
    t_sample: float = Field(gt=0)
    seed: int = 0
    boundary: Boundary = Boundary.REFLECT_AT_ZERO
    initial_income: Optional[float] = Field(default=None, ge=0)
    record_stride: int = Field(default=10, ge=1)
    n_bins: int = Field(default=200, ge=2)

    def stability_number(self) -> float:
        lp = self.lp
        return self.dt * max(abs(lp.a), abs(lp.a_prime), lp.b)

    def check_stability(self) -> None:
        """Raise StabilityError if dt * max(|a|, |a'|, b) >= 0.1."""
        number = self.stability_number()
        if number >= STABILITY_LIMIT:
            raise StabilityError(
                f"dt={self.dt} gives dt*max(|a|,|a'|,b)={number:.3g} "
                f">= {STABILITY_LIMIT}; reduce dt below "
                f"{STABILITY_LIMIT * self.dt / number:.3g} years"
            )

    @property
    def start_income(self) -> float:
        if self.initial_income is not None:
            return self.initial_income
        return self.lp.B0 / self.lp.A0

    @property
    def n_burn_steps(self) -> int:
        return max(0, round(self.t_burn / self.dt))

    @property
    def n_records(self) -> int:
        return max(1, round(self.t_sample / (self.dt * self.record_stride)))

    @property
    def n_steps(self) -> int:
        return self.n_burn_steps + self.n_records * self.record_stride


def default_config(seed: int = 2009) -> SimConfig:
    """The 2009 matched-dataset row in the gauge b = 1/year.

    With T = 37 000 the low-income relaxation time T/A0 is about 0.065 years
    and the slowest mode about half a year, hence the burn-in of three years.
    """
    return SimConfig(
        lp=to_langevin(published(2009, Dataset.MATCHED), b=1.0),
        n_agents=10_000,
        dt=1e-4,
        t_burn=3.0,
        t_sample=0.1,
        seed=seed,
    )


class StationaryHistogram(BaseModel):
    """Density estimate of recorded states on a log-spaced grid.

    The first bin is [0, lowest log edge); all others are log-spaced.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bin_edges: np.ndarray
    densities: np.ndarray
    n_samples: int = Field(ge=1)

    @field_validator("bin_edges", "densities", mode="before")
    @classmethod
    def as_float_array(cls, v: Any) -> np.ndarray:
        return np.asarray(v, dtype=float).ravel()

    @model_validator(mode="after")
    def check_density(self) -> "StationaryHistogram":
        if self.bin_edges.size != self.densities.size + 1:
            raise ValueError("need one more bin edge than densities")
        if np.any(np.diff(self.bin_edges) <= 0):
            raise ValueError("bin edges must increase strictly")
        if np.any(self.densities < 0):
            raise ValueError("densities must be non-negative")
        mass = float(np.sum(self.densities * self.widths))
        if abs(mass - 1.0) > 1e-9:
            raise ValueError(f"densities integrate to {mass}, not 1")
        return self

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        lo, hi = self.bin_edges[:-1], self.bin_edges[1:]
        # geometric centres on the log bins, arithmetic on the head bin
        return np.where(lo > 0, np.sqrt(lo * hi), 0.5 * (lo + hi))

    @property
    def counts(self) -> np.ndarray:
        return np.rint(self.densities * self.widths * self.n_samples)

    @classmethod
    def from_counts(
        cls, edges: np.ndarray, counts: np.ndarray
    ) -> "StationaryHistogram":
        n = int(counts.sum())
        densities = counts / (n * np.diff(edges))
        return cls(bin_edges=edges, densities=densities, n_samples=n)

    def merge(self, other: "StationaryHistogram") -> "StationaryHistogram":
        """Pool two histograms on the same grid."""
        if not np.array_equal(self.bin_edges, other.bin_edges):
            raise ValueError("histograms have different bin edges")
        return StationaryHistogram.from_counts(
            self.bin_edges, self.counts + other.counts
        )

    def to_tsv(self, path: Path | str) -> Path:
        """Write `bin_center<TAB>density` with a header line."""
        path = Path(path)
        frame = pd.DataFrame({"bin_center": self.centers, "density": self.densities})
        frame.to_csv(path, sep="\t", index=False, float_format="%.10g")
        return path
