"""
Configuration module for the PR-Net channel extrapolation toolkit.
Handles environment variables and process-level settings.

Per-experiment parameters live in ``app.schemas.experiment``; this module only
covers what is shared by every run in the process.
"""

from pathlib import Path
from typing import Dict, Mapping, Optional, Union

from dotenv import dotenv_values
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.errors import ConfigurationError
from app.schemas.experiment import FULL_SCALE, ExperimentConfig


class Settings(BaseSettings):
    """Process settings loaded from environment variables."""

    # Application Settings
    APP_NAME: str = "PR-Net Channel Extrapolation"
    APP_VERSION: str = "1.0.0"
    ENVIRONMENT: str = "development"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FILE: str = "logs/prnet.log"

    # Execution
    WORKERS: int = Field(default=4, ge=1)

    # Numerics
    MAX_CONDITION_NUMBER: float = Field(default=1e12, gt=1.0)
    CALIBRATION_SAMPLES: int = Field(default=1000, ge=1)

    # Monitoring
    METRICS_ENABLED: bool = True

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", case_sensitive=True, extra="ignore"
    )

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        """Accept log levels in any case."""
        if isinstance(v, str):
            return v.strip().upper()
        return v

    @field_validator("ENVIRONMENT")
    @classmethod
    def validate_environment(cls, v: str) -> str:
        """Restrict ENVIRONMENT to the known deployment modes."""
        allowed = {"development", "testing", "production"}
        if v not in allowed:
            raise ValueError(f"ENVIRONMENT must be one of {sorted(allowed)}")
        return v


# Create a global settings instance
settings = Settings()


def load_experiment_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, object]] = None,
    full_scale: bool = False,
) -> ExperimentConfig:
    """
    Build an ExperimentConfig from defaults, an optional key-value file and overrides.

    Precedence (lowest first): field defaults, ``settings.CALIBRATION_SAMPLES``,
    full-scale values, the file, overrides.
    The file holds ``key=value`` lines with ``#`` comments, parsed with python-dotenv.

    Raises:
        ConfigurationError: If the file is missing or names an unknown key
        pydantic.ValidationError: If the merged values are invalid
    """
    data: Dict[str, object] = {"calibration_samples": settings.CALIBRATION_SAMPLES}
    if full_scale:
        data.update(FULL_SCALE)
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigurationError(f"Config file not found: {path}", {"path": str(path)})
        values = {k: v for k, v in dotenv_values(path).items() if v is not None}
        unknown = sorted(set(values) - set(ExperimentConfig.model_fields))
        if unknown:
            raise ConfigurationError(f"Unknown config keys: {unknown}", {"path": str(path)})
        data.update(values)
    if overrides:
        data.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.model_validate(data)
