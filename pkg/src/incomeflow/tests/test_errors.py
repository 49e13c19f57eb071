"""Tests for the incomeflow error types."""

import pickle

import pytest

from incomeflow.errors import (
    ConfigurationError,
    DataFormatError,
    IncomeFlowError,
    ParameterError,
    QuadratureError,
    StabilityError,
)


class TestDataFormatError:
    """Tests for DataFormatError."""

    def test_path_prefix(self):
        """Test that the message starts with the file."""
        error = DataFormatError("file is empty", "incomes.csv")
        assert str(error) == "incomes.csv: file is empty"

    def test_line_numbers(self):
        """Test that at most ten line numbers are listed."""
        error = DataFormatError("bad income", "x.csv", range(2, 14))
        shown = "at line(s) 2, 3, 4, 5, 6, 7, 8, 9, 10, 11 (+2 more)"
        assert str(error).endswith(shown)
        assert error.lines == list(range(2, 14))

    def test_without_path(self):
        """Test the message of an error with no file."""
        assert str(DataFormatError("not a curve")) == "not a curve"


class TestHierarchy:
    """Tests for the error hierarchy."""

    @pytest.mark.parametrize(
        "error", [ParameterError("x"), DataFormatError("x"), StabilityError("x")]
    )
    def test_value_errors(self, error):
        """Test that input errors are both IncomeFlowError and ValueError."""
        assert isinstance(error, IncomeFlowError)
        assert isinstance(error, ValueError)

    def test_stability_is_configuration(self):
        """Test that a stability violation is a configuration error."""
        assert issubclass(StabilityError, ConfigurationError)


class TestQuadratureError:
    """Tests for QuadratureError."""

    def test_message(self):
        """Test that the achieved error is part of the message."""
        error = QuadratureError("normalisation integral", 1.5e-6)
        assert "achieved absolute error 1.500e-06" in str(error)
        assert isinstance(error, ArithmeticError)

    def test_pickle_round_trip(self):
        """Test that the error survives the trip back from a worker process."""
        error = QuadratureError("normalisation integral", 1.5e-6)
        restored = pickle.loads(pickle.dumps(error))
        assert str(restored) == str(error)
        assert restored.achieved_error == 1.5e-6
