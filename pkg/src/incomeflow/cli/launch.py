"""Process entry point of the incomeflow command line."""

from typing import Any, List, Optional

import fire
from loguru import logger

from incomeflow.cli.commands import IncomeFlowCLI
from incomeflow.utils.logging_utils import configure_logger

logger = logger.bind(component="cli")


def _quiet(result: Any) -> None:
    """Keep fire from echoing the exit code."""
    return None


def main(argv: Optional[List[str]] = None) -> int:
    """Run one incomeflow command.

    Args:
        argv: command and flags; defaults to sys.argv[1:]

    Returns:
        int: The process exit code
    """
    configure_logger()
    code = fire.Fire(IncomeFlowCLI, command=argv, name="incomeflow", serialize=_quiet)
    return code if isinstance(code, int) else 0
