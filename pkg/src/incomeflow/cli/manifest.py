"""Provenance sidecars: every output file is paired with the run that wrote it."""

import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from incomeflow import __version__
from incomeflow.errors import DataFormatError

logger = logger.bind(component="cli")

SIDECAR_SUFFIX = ".manifest.json"


class Command(str, Enum):
    CCDF = "ccdf"
    MATCH = "match"
    FIT = "fit"
    SIMULATE = "simulate"
    SAMPLE = "sample"
    REPORT = "report"


class RunManifest(BaseModel):
    """Inputs, configuration and seed of one command run.

    Attributes:
        command: which command ran
        inputs: input file paths
        config: the effective configuration, JSON-ready
        seed: random seed (0 for deterministic commands)
        outputs: every file the run wrote
        tool_version: incomeflow version
    """

    model_config = ConfigDict(frozen=True)

    command: Command
    inputs: List[str] = Field(default_factory=list)
    config: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    outputs: List[str] = Field(default_factory=list)
    tool_version: str = __version__

    def write(self) -> List[Path]:
        """Write one sidecar next to each output; returns the sidecar paths."""
        text = self.model_dump_json(indent=2)
        written = []
        for output in self.outputs:
            path = sidecar_path(output)
            path.write_text(text + "\n", encoding="utf-8")
            written.append(path)
        logger.debug(f"Wrote {len(written)} sidecar(s) for {self.command.value}")
        return written


def sidecar_path(output: Path | str) -> Path:
    return Path(f"{output}{SIDECAR_SUFFIX}")


def read_manifest(output: Path | str) -> RunManifest:
    """The manifest recorded for an output file.

    Raises:
        DataFormatError: if the sidecar is missing or not a manifest
    """
    path = sidecar_path(output)
    try:
        return RunManifest.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except FileNotFoundError as e:
        raise DataFormatError("no manifest sidecar", path) from e
    except (json.JSONDecodeError, ValueError) as e:
        raise DataFormatError(f"not a run manifest: {e}", path) from e
