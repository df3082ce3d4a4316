from pathlib import Path
from typing import List

from pydantic_settings import BaseSettings, SettingsConfigDict

from gramnets import __version__


class Settings(BaseSettings):
    """
    Process-level settings for the experiment runner and the run-artifact API.
    Reads environment variables (prefixed with GRAM_) from a .env file or the system environment.
    """
    model_config = SettingsConfigDict(
        env_prefix="GRAM_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    PROJECT_NAME: str = "gramnets"
    API_V1_STR: str = "/api/v1"
    CODE_VERSION: str = __version__

    # Origins allowed to read the run-artifact API
    CORS_ORIGINS: List[str] = ["*"]

    # Where cmd_train / cmd_grid put run directories when --out is not given.
    OUTPUT_ROOT: Path = Path("runs")

    # Default number of concurrent grid cells
    GRID_PARALLEL: int = 1

    # Debug Settings
    DEBUG: bool = False  # Controls logging verbosity
    LOG_LEVEL: str = "INFO"


# Create a single, importable instance of the settings
settings = Settings()
