"""
Pydantic schema for experiment configuration.
"""

import hashlib
import json
import math
from enum import Enum
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.domain.entities import ModelKind
from app.domain.networks import (
    complex_parameter_count,
    parity_hidden_width,
    parameter_ratio,
    real_baseline_dims,
)

PARITY_RANGE = (0.8, 1.25)
GENERATOR_VERSION = 1

_LIST_FIELDS = (
    "hidden_widths",
    "baseline_hidden_widths",
    "snr_values",
    "antenna_values",
    "mode_values",
    "models",
)


class SweepAxis(str, Enum):
    """Independent variable of a sweep."""

    SNR = "snr"
    ANTENNAS = "antennas"
    MODES = "modes"

    @property
    def column(self) -> str:
        return {"snr": "snr_db", "antennas": "antennas", "modes": "modes"}[self.value]


class ExperimentConfig(BaseModel):
    """Complete description of one run; serialized next to every result."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # Dimensions
    M: int = Field(default=16, ge=1)
    N: int = Field(default=4, ge=1)
    P: int = Field(default=4, ge=1)

    # Channel
    n_clusters: int = Field(default=4, ge=1)
    n_rays: int = Field(default=8, ge=1)
    ray_spread_deg: float = Field(default=7.5, ge=0)
    carrier_hz: float = Field(default=2.5e9, gt=0)
    spacing_m: Optional[float] = Field(default=None, gt=0)
    fourier_order_theta: int = Field(default=4, ge=1)
    fourier_order_phi: int = Field(default=4, ge=1)

    # Dataset
    sample_count: int = Field(default=2048, ge=1)
    test_fraction: float = Field(default=0.4, gt=0, lt=1)
    train_snr_db: float = 25.0
    eval_snr_db: float = 30.0
    calibration_samples: int = Field(default=1000, ge=1)

    # Training
    hidden_widths: List[int] = Field(default_factory=lambda: [128, 128, 128])
    baseline_hidden_widths: Optional[List[int]] = None
    learning_rate: float = Field(default=1e-3, gt=0)
    batch_size: int = Field(default=32, ge=1)
    epochs: int = Field(default=150, ge=0)
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    adam_eps: float = Field(default=1e-8, gt=0)
    seed: int = Field(default=0, ge=0, lt=2**64)

    # Sweeps
    snr_values: List[float] = Field(default_factory=lambda: [0, 5, 10, 15, 20, 25, 30])
    antenna_values: List[int] = Field(default_factory=lambda: [8, 16])
    mode_values: List[int] = Field(default_factory=lambda: [2, 4])
    models: List[ModelKind] = Field(default_factory=lambda: [ModelKind.PRNET])
    model_path: Optional[str] = None
    train: bool = True

    @field_validator(*_LIST_FIELDS, mode="before")
    @classmethod
    def parse_comma_separated(cls, v):
        """Parse list fields from comma-separated strings."""
        if isinstance(v, str):
            items = [item.strip() for item in v.split(",") if item.strip()]
            return items
        return v

    @field_validator("hidden_widths", "baseline_hidden_widths")
    @classmethod
    def validate_widths(cls, v):
        if v is None:
            return v
        if not v or any(width < 1 for width in v):
            raise ValueError("hidden widths must be a non-empty list of positive integers")
        return v

    @field_validator("snr_values", "antenna_values", "mode_values", "models")
    @classmethod
    def validate_unique(cls, v):
        if len(set(v)) != len(v):
            raise ValueError(f"duplicate sweep values: {v}")
        if not v:
            raise ValueError("sweep values must not be empty")
        return v

    @field_validator("train_snr_db")
    @classmethod
    def validate_train_snr(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("training SNR must be finite")
        return v

    @model_validator(mode="after")
    def validate_consistency(self) -> "ExperimentConfig":
        if self.M < self.P:
            raise ValueError(f"M={self.M} must be at least P={self.P}")
        if self.baseline_hidden_widths is not None and self.P >= 2:
            ratio = parameter_ratio(self.network_dims(), self.baseline_dims())
            low, high = PARITY_RANGE
            if not low <= ratio <= high:
                raise ValueError(
                    f"baseline parameter ratio {ratio:.3f} outside [{low}, {high}]"
                )
        return self

    def network_dims(self) -> List[int]:
        """Complex network dims: MN inputs, MN(P-1) outputs."""
        return [self.M * self.N, *self.hidden_widths, self.M * self.N * (self.P - 1)]

    def baseline_dims(self) -> List[int]:
        hidden = self.baseline_hidden_widths
        if hidden is None:
            width = parity_hidden_width(self.network_dims())
            hidden = [width] * len(self.hidden_widths)
        return real_baseline_dims(self.network_dims(), hidden)

    def complex_parameter_count(self) -> int:
        return complex_parameter_count(self.network_dims())

    def test_fraction_ratio(self) -> Fraction:
        return Fraction(self.test_fraction).limit_denominator(10_000)

    def generator_params(self) -> dict:
        """Channel-generator parameters recorded in dataset headers."""
        return {
            "generator_version": GENERATOR_VERSION,
            "n_clusters": self.n_clusters,
            "n_rays": self.n_rays,
            "ray_spread_deg": self.ray_spread_deg,
            "carrier_hz": self.carrier_hz,
            "spacing_m": self.spacing_m,
            "fourier_order_theta": self.fourier_order_theta,
            "fourier_order_phi": self.fourier_order_phi,
            "calibration_samples": self.calibration_samples,
        }

    def checksum(self) -> str:
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.blake2b(canonical.encode("utf-8"), digest_size=16).hexdigest()

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        """Re-validated copy with some fields replaced."""
        data = self.model_dump()
        data.update(overrides)
        return ExperimentConfig.model_validate(data)


FULL_SCALE = {
    "M": 64,
    "N": 8,
    "P": 8,
    "n_clusters": 10,
    "n_rays": 20,
    "carrier_hz": 2.5e9,
    "sample_count": 10240,
    "test_fraction": 0.4,
    "train_snr_db": 25.0,
    "eval_snr_db": 30.0,
    "hidden_widths": [512, 512, 512],
    "learning_rate": 1e-3,
    "batch_size": 32,
    "epochs": 500,
    "antenna_values": [16, 32, 64, 128],
    "mode_values": [2, 4, 6, 8],
}
