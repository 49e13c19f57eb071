"""Exception hierarchy for incomeflow."""

from pathlib import Path
from typing import Optional, Sequence


class IncomeFlowError(Exception):
    """Base class for every error raised by incomeflow."""


class ParameterError(IncomeFlowError, ValueError):
    """Model parameters violate an invariant."""


class QuadratureError(IncomeFlowError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, achieved_error: float):
        super().__init__(f"{message} (achieved absolute error {achieved_error:.3e})")
        self.message = message
        self.achieved_error = achieved_error

    def __reduce__(self):
        # worker processes send errors back pickled
        return (type(self), (self.message, self.achieved_error))


class EmptySampleError(IncomeFlowError, ValueError):
    """An operation received no usable records."""


class DataFormatError(IncomeFlowError, ValueError):
    """A data file is malformed."""

    def __init__(
        self,
        message: str,
        path: Optional[Path | str] = None,
        lines: Sequence[int] = (),
    ):
        self.path = Path(path) if path is not None else None
        self.lines = list(lines)
        where = f"{self.path}: " if self.path is not None else ""
        if self.lines:
            shown = ", ".join(str(n) for n in self.lines[:10])
            more = f" (+{len(self.lines) - 10} more)" if len(self.lines) > 10 else ""
            message = f"{message} at line(s) {shown}{more}"
        super().__init__(f"{where}{message}")


class MatchingError(IncomeFlowError):
    """No scale factor makes the rich-list segment overlap the survey."""


class ConfigurationError(IncomeFlowError, ValueError):
    """A run configuration cannot be used as given."""


class StabilityError(ConfigurationError):
    """The time step violates the Euler-Maruyama stability heuristic."""
