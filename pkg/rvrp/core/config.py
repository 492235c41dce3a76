import os
from functools import lru_cache

from dotenv import dotenv_values
from typing_extensions import Self
from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


def _env_file() -> str | None:
    if os.getenv("ENVIRONMENT") == "dev":
        return ".env.dev"
    elif os.getenv("ENVIRONMENT") == "prod":
        return ".env.prod"
    return None


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="RVRP_", env_file=_env_file(), extra="ignore"
    )

    APP_NAME: str = "rvrp"
    APP_VERSION: str = "0.1.0"
    LOG_LEVEL: str = "INFO"
    DEBUGGER: bool = False
    DEBUGGER_HOST: str = "127.0.0.1"
    DEBUGGER_PORT: int = 10001
    SEED: int = 0

    # belief discretization
    P_MIN: float = 1e-6

    # benchmark grid and speeds
    GRID_ROWS: int = 16
    GRID_COLS: int = 16
    GRID_SPACING: float = 50.0
    SPEED_MEAN: float = 10.0
    SPEED_STD: float = 2.0
    SPEED_FLOOR_RATIO: float = 0.2
    ITERATIONS: int = 500

    # guards
    EXACT_MAX_OUTCOMES: int = 1_000_000
    OPTIMAL_MAX_FREE: int = 20
    TOLERANCE: float = 1e-9

    # continuous dispatch
    BATCH_SECONDS: float = 20.0
    MAX_WAIT_SECONDS: float = 600.0
    FLEET_FACTOR: float = 1.56
    UNASSIGNED_RATIO: float = 0.5
    MIN_FLEET: int = 10
    SEGMENT_SECONDS: float = 4 * 3600.0

    JOBS: int = 0

    NOISE_DEFAULTS: dict[str, float] = {
        "gaussian": 100.0,
        "laplace": 100.0 / 2**0.5,
        "uniform": 200.0,
        "none": 0.0,
    }

    @model_validator(mode="after")
    def validate_ranges(self) -> Self:
        if not 0.0 <= self.P_MIN < 1.0:
            raise ValueError("P_MIN must lie in [0, 1)")
        if self.JOBS <= 0:
            self.JOBS = os.cpu_count() or 1
        return self


def read_config_file(path: str) -> dict[str, str]:
    """Parse a flat key=value config file; keys are lower-cased."""
    return {
        key.strip().lower(): value
        for key, value in dotenv_values(path).items()
        if value is not None
    }


@lru_cache()
def get_settings() -> Settings:
    """Get the settings for the application."""
    return Settings()


settings: Settings = get_settings()
