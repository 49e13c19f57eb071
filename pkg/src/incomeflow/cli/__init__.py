"""Command line: ccdf, match, fit, simulate, sample and report."""

from incomeflow.cli.commands import IncomeFlowCLI
from incomeflow.cli.launch import main
from incomeflow.cli.manifest import Command, RunManifest, read_manifest

__all__ = ["Command", "IncomeFlowCLI", "RunManifest", "main", "read_manifest"]
