"""Fixtures shared by the incomeflow test suites."""

import pytest
from loguru import logger

from incomeflow.model import Dataset, EyParams, EyShape, normalize, published


@pytest.fixture(autouse=True)
def quiet_logger():
    """Keep library log records out of the test output."""
    logger.disable("incomeflow")
    yield
    logger.enable("incomeflow")


@pytest.fixture
def mds_2008() -> EyParams:
    """Matched-dataset parameters of 2008 (alpha1 < 1)."""
    return normalize(published(2008, Dataset.MATCHED))


@pytest.fixture
def mds_2009() -> EyParams:
    """Matched-dataset parameters of 2009 (alpha close to alpha1)."""
    return normalize(published(2009, Dataset.MATCHED))


@pytest.fixture
def survey_2008() -> EyParams:
    """Survey-only parameters of 2008."""
    return normalize(published(2008, Dataset.SURVEY_ONLY))


@pytest.fixture
def wide_medium_class() -> EyParams:
    """Synthetic parameters with four decades between m0 and m1."""
    return normalize(
        EyShape(T=1_000.0, T1=1.0e6, m0=1_000.0, m1=1.0e7, alpha=3.0, alpha1=1.5)
    )
