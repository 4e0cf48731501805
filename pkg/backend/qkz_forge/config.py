"""Application configuration settings."""
import os
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Engine settings loaded from environment variables."""

    # Randomized identity pre-filters
    seed: int = Field(default=int(os.getenv("QKZ_SEED", "20240607")))
    trials: int = Field(default=int(os.getenv("QKZ_TRIALS", "3")))

    # Problem size guard for the CLI
    max_n: int = 6

    # Largest N for which two-boundary solves also run the Koornwinder-span system
    span_solve_max_n: int = Field(default=int(os.getenv("QKZ_SPAN_SOLVE_MAX_N", "2")))

    # Boundary convention for the e-hat operators
    ehat_convention: Literal["boundary-param", "uniform-q"] = Field(
        default=os.getenv("QKZ_EHAT_CONVENTION", "boundary-param")
    )

    # Application
    app_name: str = "qkz-forge"
    app_version: str = "0.1.0"
    log_level: str = Field(default=os.getenv("QKZ_LOG_LEVEL", "WARNING"))

    class Config:
        env_file = ".env"
        case_sensitive = False


settings = Settings()
