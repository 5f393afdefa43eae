"""Inspect artifact use case."""

from typing import Any, Dict

from app.errors import FormatError
from app.ports.checkpoint_store import CheckpointStorePort
from app.ports.dataset_store import DatasetStorePort


class InspectArtifactUseCase:
    """Use case for describing a dataset or checkpoint file."""

    def __init__(self, dataset_store: DatasetStorePort, checkpoint_store: CheckpointStorePort):
        self.dataset_store = dataset_store
        self.checkpoint_store = checkpoint_store

    def execute(self, location: str) -> Dict[str, Any]:
        """Decode the artifact at ``location`` and return its header fields.

        Raises:
            FormatError: If the artifact is neither a dataset nor a checkpoint
        """
        try:
            dataset = self.dataset_store.load(location)
        except FormatError as exc:
            if "magic" not in exc.details:
                raise
        else:
            header = dataset.header
            return {
                "kind": "dataset",
                "M": header.M,
                "N": header.N,
                "P": header.P,
                "samples": header.sample_count,
                "test_fraction": f"{header.test_numerator}/{header.test_denominator}",
                "train_snr_db": header.train_snr_db,
                "master_seed": header.master_seed,
                "format_version": header.format_version,
                "layout_version": header.layout_version,
                "generator": header.generator_params(),
                "train": int(dataset.train_indices.size),
                "test": int(dataset.test_indices.size),
            }

        model = self.checkpoint_store.load(location)
        return {
            "kind": "checkpoint",
            "model": model.kind.value,
            "dims": model.network.dims,
            "parameters": model.parameter_count(),
            "scale": model.scale,
            "checksum": model.network.checksum(),
        }
