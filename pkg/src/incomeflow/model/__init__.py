"""The equilibrium income law: parameters, density, CCDF, oracle, sampling."""

from incomeflow.model.asymptotics import Asymptote, asymptote, local_slope
from incomeflow.model.distribution import (
    ccdf_eq,
    cdf_eq,
    from_langevin,
    isf,
    mean_income,
    normalize,
    pdf_eq,
)
from incomeflow.model.oracle import pdf_from_integral
from incomeflow.model.params import (
    AsymptoticRegime,
    EyParams,
    EyShape,
    LangevinParams,
    Regime,
    to_langevin,
)
from incomeflow.model.sampling import sample
from incomeflow.model.tables import PUBLISHED_ROWS, Dataset, PublishedRow, published

__all__ = [
    "Asymptote",
    "AsymptoticRegime",
    "Dataset",
    "EyParams",
    "EyShape",
    "LangevinParams",
    "PUBLISHED_ROWS",
    "PublishedRow",
    "Regime",
    "asymptote",
    "ccdf_eq",
    "cdf_eq",
    "from_langevin",
    "isf",
    "local_slope",
    "mean_income",
    "normalize",
    "pdf_eq",
    "pdf_from_integral",
    "published",
    "sample",
    "to_langevin",
]
