"""Tests for exit_on_error."""

from unittest.mock import patch

import pytest
from pydantic import BaseModel, PositiveInt, ValidationError

from incomeflow.cli.decorators import EXIT_ERROR, EXIT_OK, exit_on_error
from incomeflow.errors import DataFormatError, ParameterError


class _Positive(BaseModel):
    n: PositiveInt


class TestExitOnError:
    """Tests for the exit_on_error decorator."""

    def test_passes_through_exit_code(self):
        """Test that a command's own exit code is returned unchanged."""

        @exit_on_error
        def command(x):
            return EXIT_OK if x else 5

        assert command(True) == EXIT_OK
        assert command(False) == 5

    def test_library_error_becomes_exit_one(self):
        """Test that an IncomeFlowError is logged and turned into exit code 1."""

        @exit_on_error
        def command():
            raise DataFormatError("file is empty", "incomes.csv")

        with patch("incomeflow.cli.decorators.logger") as mock_logger:
            assert command() == EXIT_ERROR
        message = mock_logger.error.call_args[0][0]
        assert message.startswith("command failed:")
        assert "incomes.csv" in message

    def test_parameter_error(self):
        """Test that parameter errors exit with code 1."""

        @exit_on_error
        def command():
            raise ParameterError("alpha1 must be below alpha")

        assert command() == EXIT_ERROR

    def test_validation_error_becomes_exit_one(self):
        """Test that pydantic validation failures exit with code 1."""

        @exit_on_error
        def command():
            _Positive(n=0)
            return EXIT_OK

        assert command() == EXIT_ERROR

    def test_unexpected_error_reraised(self):
        """Test that programming errors keep their traceback."""

        @exit_on_error
        def command():
            raise RuntimeError("bug")

        with patch("incomeflow.cli.decorators.logger") as mock_logger:
            with pytest.raises(RuntimeError, match="bug"):
                command()
        mock_logger.exception.assert_called_once()

    def test_wraps_metadata(self):
        """Test that the wrapped name and docstring survive."""

        @exit_on_error
        def command():
            """Docstring."""
            return EXIT_OK

        assert command.__name__ == "command"
        assert command.__doc__ == "Docstring."

    def test_validation_error_is_not_library_error(self):
        """Test that the validation branch is distinct from IncomeFlowError."""
        with pytest.raises(ValidationError):
            _Positive(n=-1)
