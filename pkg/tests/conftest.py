"""
Pytest configuration and fixtures.
"""

import os
import tempfile

import numpy as np
import pytest

# Set test environment variables before any imports
os.environ.setdefault("ENVIRONMENT", "testing")
os.environ.setdefault("LOG_LEVEL", "WARNING")
os.environ.setdefault("LOG_FILE", os.path.join(tempfile.gettempdir(), "prnet-tests", "prnet.log"))
os.environ.setdefault("WORKERS", "2")
os.environ.setdefault("METRICS_ENABLED", "true")

from app.composition import build_in_memory_services  # noqa: E402
from app.domain.channel import build_pattern_gain_model, sample_paths  # noqa: E402
from app.domain.entities import ArrayGeometry  # noqa: E402
from app.schemas.experiment import ExperimentConfig  # noqa: E402

TINY = {
    "M": 6,
    "N": 2,
    "P": 3,
    "n_clusters": 3,
    "n_rays": 4,
    "sample_count": 40,
    "test_fraction": 0.25,
    "calibration_samples": 200,
    "hidden_widths": [16, 16],
    "batch_size": 8,
    "epochs": 3,
    "snr_values": [0, 10, 20],
    "antenna_values": [4, 6],
    "mode_values": [2, 3],
    "seed": 7,
}


@pytest.fixture
def tiny_config():
    """Small experiment that runs the whole pipeline in well under a second."""
    return ExperimentConfig(**TINY)


@pytest.fixture
def rng():
    """Seeded generator for test data."""
    return np.random.default_rng(1234)


@pytest.fixture
def geometry():
    """Half-wavelength arrays with M=8, N=4 at 2.5 GHz."""
    return ArrayGeometry.half_wavelength(M=8, N=4, f=2.5e9)


@pytest.fixture
def paths():
    """Seeded path set with 3 clusters of 5 rays."""
    return sample_paths(seed=11, Ncl=3, Nray=5)


@pytest.fixture
def gains():
    """Seeded pattern-gain model for 3 modes."""
    return build_pattern_gain_model(seed=5, P=3, U_theta=3, U_phi=2)


@pytest.fixture
def services():
    """In-memory composition of every service and use case."""
    return build_in_memory_services(workers=2)


def complex_randn(rng, shape):
    """Unit-variance circular complex Gaussian test data."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
