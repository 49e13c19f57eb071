from pathlib import Path
from typing import Optional

from pydantic import ConfigDict
from pydantic_settings import BaseSettings


class Logging(BaseSettings):
    # INCOMEFLOW_LOG sets the console verbosity
    LOG: str = "INFO"
    LOG_FILE_LEVEL: str = "DEBUG"
    LOG_ROTATION: str = "10 MB"
    LOG_RETENTION: str = "1 week"

    model_config = ConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="allow",
        env_prefix="INCOMEFLOW_",
    )

    def console_level(self) -> str:
        """Return the console level, normalised to loguru's upper-case names."""
        return self.LOG.strip().upper() or "INFO"


LOGGING = Logging()


class Paths(BaseSettings):
    BASE_DIR: Path = Path(__file__).parent.parent
    LOGS_DIR: Path = Path("logs")
    OUTPUT_DIR: Path = Path(".")
    LOG_FILENAME: str = "incomeflow.log"

    model_config = ConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="allow",
        env_prefix="INCOMEFLOW_",
    )

    def resolve_output(self, path: Optional[Path | str]) -> Path:
        """Return `path` as given when absolute, else relative to OUTPUT_DIR."""
        if path is None:
            return self.OUTPUT_DIR
        path = Path(path)
        if path.is_absolute():
            return path
        return self.OUTPUT_DIR / path

    @property
    def LOG_FILE(self) -> Path:
        return self.LOGS_DIR / self.LOG_FILENAME


PATHS = Paths()


class Numerics(BaseSettings):
    QUAD_EPSABS: float = 1e-10
    QUAD_EPSREL: float = 1e-8
    QUAD_LIMIT: int = 200
    # numeric integration stops at TAIL_CUT * m1, the rest is the Pareto tail
    TAIL_CUT: float = 1e4
    NODES_PER_DECADE: int = 256
    GAUSS_ORDER: int = 8
    SAMPLING_NODES: int = 4096
    GAP_TOLERANCE: float = 0.15

    model_config = ConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="allow",
        env_prefix="INCOMEFLOW_NUM_",
    )

    def quad_options(self) -> dict:
        """Keyword arguments shared by every scipy.integrate.quad call."""
        return {
            "epsabs": self.QUAD_EPSABS,
            "epsrel": self.QUAD_EPSREL,
            "limit": self.QUAD_LIMIT,
        }


NUMERICS = Numerics()
