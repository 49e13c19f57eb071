"""Configuration and report types of the parameter fit."""

from enum import Enum
from typing import FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from incomeflow.model.params import EyParams, EyShape


class Parameter(str, Enum):
    """The six structural parameters, in table order."""

    T = "T"
    T1 = "T1"
    M0 = "m0"
    M1 = "m1"
    ALPHA = "alpha"
    ALPHA1 = "alpha1"


PARAMETER_ORDER: Tuple[Parameter, ...] = tuple(Parameter)
LOW_STAGE = (Parameter.T, Parameter.M0, Parameter.ALPHA)
HIGH_STAGE = (Parameter.T1, Parameter.M1, Parameter.ALPHA1)


class Loss(str, Enum):
    """What `fit` minimises.

    LOG_LOG_LEAST_SQUARES: weighted squared log10-exceedance residuals
    GROUPED_LIKELIHOOD: divergence of the exceedance increments between
        consecutive curve points
    """

    LOG_LOG_LEAST_SQUARES = "LogLogLeastSquares"
    GROUPED_LIKELIHOOD = "GroupedLikelihood"


class FitConfig(BaseModel):
    """How `fit` runs.

    Attributes:
        free_params: parameters the fit may move; the rest stay at the guess
        initial_guess: starting point (structural parameters)
        loss: what the fit minimises (see Loss)
        max_evals: budget of objective evaluations over all stages
        tolerance: objective improvement below which a restart counts as
            converged
        restarts: simplex restarts of the joint polish
        top_ranks: number of richest points down-weighted by least squares
        top_weight: weight of those points
        max_points: curves longer than this are thinned before fitting,
            spreading the kept points over both rank and log-income
        guess_flags: markers inherited from the guess (see default_fit_config)
    """

    model_config = ConfigDict(frozen=True)

    free_params: FrozenSet[Parameter] = Field(
        default=frozenset(Parameter), min_length=1
    )
    initial_guess: EyShape
    loss: Loss = Loss.GROUPED_LIKELIHOOD
    max_evals: int = Field(default=8_000, ge=10)
    tolerance: float = Field(default=1e-12, gt=0)
    restarts: int = Field(default=3, ge=0)
    top_ranks: int = Field(default=5, ge=0)
    top_weight: float = Field(default=0.2, gt=0, le=1)
    max_points: int = Field(default=4_000, ge=10)
    guess_flags: Tuple[str, ...] = ()

    def free(self, stage: Tuple[Parameter, ...] = PARAMETER_ORDER) -> List[Parameter]:
        """Free parameters of `stage`, in table order."""
        return [name for name in stage if name in self.free_params]


class CrossoverGuess(BaseModel):
    """Knees of a log-log CCDF from a three-segment fit.

    Attributes:
        m0, m1: breakpoint incomes (EUR/year), m0 < m1
        slopes: log-log slopes of the three segments
        rss: residual sum of squares of the three-segment fit
        low_confidence: the segments are not clearly distinct
    """

    model_config = ConfigDict(frozen=True)

    m0: float = Field(gt=0)
    m1: float = Field(gt=0)
    slopes: Tuple[float, float, float]
    rss: float = Field(ge=0)
    low_confidence: bool = False

    @model_validator(mode="after")
    def check_order(self) -> "CrossoverGuess":
        if self.m1 <= self.m0:
            raise ValueError(f"m1={self.m1} must exceed m0={self.m0}")
        return self


class FitReport(BaseModel):
    """Result of `fit`.

    Attributes:
        params: fitted parameters with their normalisation constants
        residual_rms: weighted RMS of log10-exceedance residuals
        residual_low: RMS over points below m1 (None without such points)
        residual_high: RMS over points at or above m1 (None without such points)
        n_points_used: curve points entering the loss
        n_tail_points: curve points at or above the fitted m1
        converged: the polish met the tolerance within max_evals
        n_evals: objective evaluations spent
        flags: degeneracy and confidence markers
        loss: loss function used
        weighting: description of the point weights
        year, dataset: optional labels
    """

    model_config = ConfigDict(frozen=True)

    params: EyParams
    residual_rms: float = Field(ge=0)
    residual_low: Optional[float] = Field(default=None, ge=0)
    residual_high: Optional[float] = Field(default=None, ge=0)
    n_points_used: int = Field(ge=0)
    n_tail_points: int = Field(default=0, ge=0)
    converged: bool
    n_evals: int = Field(default=0, ge=0)
    flags: List[str] = Field(default_factory=list)
    loss: Loss = Loss.GROUPED_LIKELIHOOD
    weighting: str = ""
    year: Optional[int] = None
    dataset: Optional[str] = None
