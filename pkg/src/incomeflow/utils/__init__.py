"""Shared utilities."""

from incomeflow.utils.logging_utils import (
    cleanup_logger,
    configure_logger,
    setup_directories,
)

__all__ = [
    "cleanup_logger",
    "configure_logger",
    "setup_directories",
]
