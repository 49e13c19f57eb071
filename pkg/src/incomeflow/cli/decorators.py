"""
Decorators for the incomeflow command line.

Commands return a process exit code. Library errors become exit code 1 with
the diagnostic logged; programming errors keep their traceback.
"""

import functools
from typing import Any, Callable, TypeVar, cast

from loguru import logger
from pydantic import ValidationError

from incomeflow.errors import IncomeFlowError

logger = logger.bind(component="cli")

T = TypeVar("T", bound=Callable[..., Any])

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2
EXIT_GAP_OPEN = 3


def exit_on_error(func: T) -> T:
    """
    Turn IncomeFlowError and pydantic.ValidationError into exit code 1.

    Any other exception is logged with its traceback and re-raised.

    Args:
        func: A command returning an exit code

    Returns:
        The decorated command
    """

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> int:
        try:
            logger.debug(f"Running command {func.__name__} with kwargs={kwargs}")
            return func(*args, **kwargs)
        except (IncomeFlowError, ValidationError) as e:
            logger.error(f"{func.__name__} failed: {e}")
            return EXIT_ERROR
        except Exception:
            logger.exception(f"Unexpected error in {func.__name__}")
            raise

    return cast(T, wrapper)
