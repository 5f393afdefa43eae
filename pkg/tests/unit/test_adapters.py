"""
Unit tests for the in-memory and filesystem adapters.
"""

import json
import math

import numpy as np
import pytest

from app.adapters.filesystem.run_recorder import FilesystemRunRecorder
from app.adapters.inmemory.checkpoint_store import InMemoryCheckpointStore
from app.adapters.inmemory.dataset_store import InMemoryDatasetStore
from app.adapters.inmemory.run_recorder import InMemoryRunRecorder
from app.domain.dataset import assemble_dataset
from app.domain.entities import DatasetHeader, ModelKind
from app.domain.extrapolator import NetworkExtrapolator
from app.domain.networks import init_network
from app.errors import FormatError
from app.schemas.experiment import SweepAxis
from app.schemas.results import SweepResult, SweepRow
from tests.conftest import complex_randn

pytestmark = pytest.mark.unit


@pytest.fixture
def dataset(rng):
    header = DatasetHeader(
        M=2,
        N=1,
        P=2,
        sample_count=4,
        test_numerator=1,
        test_denominator=4,
        train_snr_millibels=1000,
        master_seed=3,
    )
    return assemble_dataset(header, complex_randn(rng, (4, 2)), complex_randn(rng, (4, 2)))


@pytest.fixture
def result():
    return SweepResult(
        axis=SweepAxis.MODES,
        rows=[SweepRow(value=2, model=ModelKind.PRNET, nmse_linear=0.1, nmse_db=-10.0)],
        config_checksum="abc",
    )


class TestInMemoryDatasetStore:
    """Test suite for InMemoryDatasetStore."""

    def test_save_load(self, dataset):
        """Test stored datasets go through the binary codec."""
        store = InMemoryDatasetStore()
        store.save(dataset, "a")

        assert store.exists("a")
        assert store.get_blob("a")[:4] == b"PRNC"
        np.testing.assert_array_equal(store.load("a").inputs, dataset.inputs)

    def test_missing(self):
        """Test loading an unknown location fails."""
        with pytest.raises(FormatError):
            InMemoryDatasetStore().load("missing")


class TestInMemoryCheckpointStore:
    """Test suite for InMemoryCheckpointStore."""

    def test_save_load(self):
        """Test checkpoints round-trip through the codec."""
        store = InMemoryCheckpointStore()
        model = NetworkExtrapolator(init_network([2, 3, 2], 0), 1.0)
        store.save(model, "m")

        assert store.load("m").network.checksum() == model.network.checksum()
        assert not store.exists("other")
        with pytest.raises(FormatError):
            store.load("other")


class TestRunRecorders:
    """Test suite for the run recorders."""

    def test_in_memory(self, tiny_config, result):
        """Test the in-memory recorder keeps every artifact."""
        recorder = InMemoryRunRecorder()
        recorder.record_config(tiny_config)
        recorder.record_seeds({"master": 7})
        recorder.record_seeds({"split": 1})
        recorder.record_result(result)

        assert recorder.config == tiny_config
        assert recorder.seeds == {"master": 7, "split": 1}
        assert recorder.results == [result]
        assert recorder.artifact_path("x.prnc") == "memory://x.prnc"

    def test_filesystem(self, tiny_config, result, tmp_path):
        """Test the run directory receives config, seeds, results and summary."""
        recorder = FilesystemRunRecorder(tmp_path / "run")
        recorder.record_config(tiny_config)
        recorder.record_seeds({"master": 7})
        recorder.record_seeds({"split": 1})
        recorder.record_result(result)
        recorder.record_summary({"train": {"epochs": 3}})

        run_dir = tmp_path / "run"
        config = json.loads((run_dir / "config.json").read_text())
        assert config["checksum"] == tiny_config.checksum()
        assert config["config"]["M"] == 6
        assert json.loads((run_dir / "seeds.json").read_text()) == {"master": 7, "split": 1}
        assert (run_dir / "results_modes.csv").read_text().startswith("modes,")
        summary = json.loads((run_dir / "summary.json").read_text())
        assert summary["modes"]["config_checksum"] == "abc"
        assert summary["train"] == {"epochs": 3}
        assert recorder.artifact_path("m.prnw") == str(run_dir / "m.prnw")

    def test_filesystem_reads_back_full_result(self, tmp_path):
        """Test a recorded sweep reads back equal to the result that produced it."""
        result = SweepResult(
            axis=SweepAxis.SNR,
            rows=[
                SweepRow(
                    value=0.0,
                    model=ModelKind.PRNET,
                    nmse_linear=0.1234567890123,
                    nmse_db=10 * math.log10(0.1234567890123),
                    sample_count=40,
                    parameter_count=1234,
                    estimation_nmse_db=-3.25,
                ),
                SweepRow(
                    value=10.0,
                    model=ModelKind.COPY,
                    nmse_linear=0.5,
                    nmse_db=10 * math.log10(0.5),
                    sample_count=40,
                ),
            ],
            config_checksum="c0ffee",
        )
        recorder = FilesystemRunRecorder(tmp_path / "run")
        recorder.record_result(result)

        assert recorder.read_result(SweepAxis.SNR) == result
        assert FilesystemRunRecorder(tmp_path / "run").read_result(SweepAxis.SNR) == result

    def test_filesystem_table_without_summary(self, result, tmp_path):
        """Test a bare results table still parses to its rows."""
        recorder = FilesystemRunRecorder(tmp_path / "run")
        recorder.record_result(result)
        (tmp_path / "run" / "summary.json").unlink()

        parsed = recorder.read_result(SweepAxis.MODES)

        assert parsed.rows == result.rows
        assert parsed.config_checksum == ""

    def test_filesystem_table_summary_mismatch(self, result, tmp_path):
        """Test an edited table that disagrees with the summary is rejected."""
        recorder = FilesystemRunRecorder(tmp_path / "run")
        recorder.record_result(result)
        (tmp_path / "run" / "results_modes.csv").write_text(
            "modes,nmse_linear,nmse_db,model\n3,0.1,-10.0,prnet\n", encoding="utf-8"
        )

        with pytest.raises(FormatError):
            recorder.read_result(SweepAxis.MODES)

    def test_filesystem_missing_table(self, tmp_path):
        """Test reading an axis that was never recorded fails."""
        with pytest.raises(FormatError):
            FilesystemRunRecorder(tmp_path / "run").read_result(SweepAxis.ANTENNAS)
