"""Generate dataset use case."""

from typing import Optional, Tuple

from app.application.services.dataset_service import DatasetService, seed_manifest
from app.domain.entities import Dataset
from app.ports.dataset_store import DatasetStorePort
from app.ports.run_recorder import RunRecorderPort
from app.schemas.experiment import ExperimentConfig

DATASET_NAME = "dataset.prnc"


class GenerateDatasetUseCase:
    """Use case for building and storing a training dataset."""

    def __init__(
        self,
        dataset_service: DatasetService,
        dataset_store: DatasetStorePort,
        run_recorder: RunRecorderPort,
    ):
        """Initialize use case.

        Args:
            dataset_service: Builds the samples
            dataset_store: Persists the encoded dataset
            run_recorder: Records config, seeds and summary of the run
        """
        self.dataset_service = dataset_service
        self.dataset_store = dataset_store
        self.run_recorder = run_recorder

    def execute(
        self, config: ExperimentConfig, location: Optional[str] = None
    ) -> Tuple[Dataset, str]:
        """Execute the use case.

        Returns:
            The dataset and the location it was stored at
        """
        self.run_recorder.record_config(config)
        self.run_recorder.record_seeds(seed_manifest(config))
        dataset = self.dataset_service.build_dataset(config)
        location = self.dataset_store.save(
            dataset, location or self.run_recorder.artifact_path(DATASET_NAME)
        )
        self.run_recorder.record_summary(
            {
                "dataset": {
                    "location": location,
                    "samples": dataset.sample_count,
                    "train": int(dataset.train_indices.size),
                    "test": int(dataset.test_indices.size),
                    "train_snr_db": dataset.header.train_snr_db,
                }
            }
        )
        return dataset, location
