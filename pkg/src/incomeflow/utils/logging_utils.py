"""Logging set-up for incomeflow.

Library modules only bind a component name to the shared loguru logger; the
sinks are installed once by the command line through `configure_logger`.
"""

import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from config.env import LOGGING, PATHS

# Store logger IDs for proper cleanup
logger_ids: List[int] = []
logger_configured = False

logs_dir: Path = PATHS.LOGS_DIR


def setup_directories() -> Path:
    """Create the logs directory, falling back to the home directory.

    Returns:
        Path: The logs directory in use
    """
    global logs_dir

    logs_dir = PATHS.LOGS_DIR
    if not logs_dir.exists():
        try:
            logs_dir.mkdir(parents=True, exist_ok=True)
            logger.debug(f"Created logs directory at {logs_dir}")
        except PermissionError:
            logs_dir = Path.home() / ".incomeflow" / "logs"
            logs_dir.mkdir(parents=True, exist_ok=True)
            logger.warning(
                f"Using fallback logs directory at {logs_dir} due to permission error"
            )
    return logs_dir


def configure_logger(level: Optional[str] = None, log_to_file: bool = True) -> None:
    """Configure logger to write to stderr and to a rotating file.

    Args:
        level: Console level; defaults to INCOMEFLOW_LOG
        log_to_file: Whether to add the file sink
    """
    global logger_ids, logger_configured

    if logger_configured:
        return

    logger.remove()
    logger_ids = []

    stderr_id = logger.add(
        sys.stderr,
        level=(level or LOGGING.console_level()).upper(),
        format=(
            "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
            "<level>{level: <8}</level> | "
            "<cyan>{extra[component]}</cyan> - "
            "<level>{message}</level>"
        ),
    )
    logger_ids.append(stderr_id)

    if log_to_file:
        try:
            file_id = logger.add(
                setup_directories() / PATHS.LOG_FILENAME,
                rotation=LOGGING.LOG_ROTATION,
                retention=LOGGING.LOG_RETENTION,
                level=LOGGING.LOG_FILE_LEVEL,
                format=(
                    "{time:YYYY-MM-DD HH:mm:ss} | "
                    "{level: <8} | "
                    "{extra[component]} | {name}:{function}:{line} - "
                    "{message}"
                ),
                backtrace=True,
                diagnose=False,
                enqueue=True,
                catch=True,
            )
            logger_ids.append(file_id)
        except Exception as e:
            logger.warning(f"Could not configure file logger: {e}")

    logger_configured = True


def cleanup_logger() -> None:
    """Clean up logger handlers to avoid errors on exit."""
    global logger_ids, logger_configured

    logger.remove()
    logger_ids = []
    logger_configured = False


# records logged before any component is bound still render
logger.configure(extra={"component": "incomeflow"})
