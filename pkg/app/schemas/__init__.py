"""Schemas module for Pydantic models."""

from app.schemas.experiment import FULL_SCALE, ExperimentConfig, SweepAxis
from app.schemas.results import SweepResult, SweepRow

__all__ = [
    # Experiment schemas
    "ExperimentConfig",
    "SweepAxis",
    "FULL_SCALE",
    # Result schemas
    "SweepRow",
    "SweepResult",
]
