"""
Desk-scale learning checks.

These train full desk-scale networks and take minutes; they are deselected by
default and run with ``pytest -m slow``.
"""

import pytest

from app.composition import build_in_memory_services
from app.domain.entities import ModelKind
from app.schemas.experiment import ExperimentConfig

pytestmark = [pytest.mark.integration, pytest.mark.slow]

VIOLATION_TOLERANCE_DB = 0.5


def test_prnet_learns_and_improves_with_snr():
    """Test PR-Net reaches -10 dB at 25 dB and its NMSE does not grow with SNR."""
    config = ExperimentConfig(snr_values=[0, 10, 20, 25, 30])

    result = build_in_memory_services()["sweep_service"].run_snr_sweep(config)
    curve = dict(zip(result.values(), result.nmse_db(ModelKind.PRNET)))

    assert curve[25.0] <= -10.0
    trend = [curve[snr] for snr in (0.0, 10.0, 20.0, 30.0)]
    for low, high in zip(trend, trend[1:]):
        assert high <= low + VIOLATION_TOLERANCE_DB, trend


def test_complex_network_not_worse_than_real_baseline():
    """Test PR-Net is within 1 dB of the parity-sized real baseline, averaged over seeds."""
    per_seed = {}
    for seed in (0, 1, 2):
        config = ExperimentConfig(seed=seed, models=["prnet", "dnn"], snr_values=[30])
        result = build_in_memory_services()["sweep_service"].run_snr_sweep(config)
        per_seed[seed] = {row.model.value: row.nmse_db for row in result.rows}
        ratio = result.rows[1].parameter_count / result.rows[0].parameter_count
        assert 0.8 <= ratio <= 1.25

    prnet = sum(scores["prnet"] for scores in per_seed.values()) / 3
    dnn = sum(scores["dnn"] for scores in per_seed.values()) / 3
    assert prnet <= dnn + 1.0, per_seed
