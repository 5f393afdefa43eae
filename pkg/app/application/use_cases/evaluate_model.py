"""Evaluate model use case."""

from typing import Optional

from app.application.services.dataset_service import DatasetService, seed_manifest
from app.application.services.sweep_service import Evaluation, SweepService
from app.ports.checkpoint_store import CheckpointStorePort
from app.ports.dataset_store import DatasetStorePort
from app.ports.run_recorder import RunRecorderPort
from app.schemas.experiment import ExperimentConfig


class EvaluateModelUseCase:
    """Use case for scoring a stored model on a dataset's test split."""

    def __init__(
        self,
        sweep_service: SweepService,
        dataset_service: DatasetService,
        dataset_store: DatasetStorePort,
        checkpoint_store: CheckpointStorePort,
        run_recorder: RunRecorderPort,
    ):
        """Initialize use case.

        Args:
            sweep_service: Scores models
            dataset_service: Rebuilds the dataset when none is given
            dataset_store: Loads a stored dataset
            checkpoint_store: Loads the trained model
            run_recorder: Records config, seeds and the score
        """
        self.sweep_service = sweep_service
        self.dataset_service = dataset_service
        self.dataset_store = dataset_store
        self.checkpoint_store = checkpoint_store
        self.run_recorder = run_recorder

    def execute(
        self,
        config: ExperimentConfig,
        checkpoint_location: str,
        dataset_location: Optional[str] = None,
        snr_db: Optional[float] = None,
    ) -> Evaluation:
        """Execute the use case.

        Args:
            config: Configuration the model and dataset were produced with
            checkpoint_location: Stored model
            dataset_location: Stored dataset; rebuilt from ``config`` when omitted
            snr_db: Evaluation SNR; the stored inputs are used when omitted

        Returns:
            The evaluation result
        """
        self.run_recorder.record_config(config)
        self.run_recorder.record_seeds(seed_manifest(config))
        model = self.checkpoint_store.load(checkpoint_location)
        if dataset_location is not None:
            dataset = self.dataset_store.load(dataset_location)
        else:
            dataset = self.dataset_service.build_dataset(config)
        result = self.sweep_service.evaluate(config, model, dataset, snr_db)
        self.run_recorder.record_summary(
            {
                "evaluation": {
                    "model": model.kind.value,
                    "checkpoint": checkpoint_location,
                    "snr_db": snr_db if snr_db is not None else dataset.header.train_snr_db,
                    "nmse_linear": result.nmse_linear,
                    "nmse_db": result.nmse_db,
                    "estimation_nmse": result.estimation_nmse,
                    "samples": result.sample_count,
                }
            }
        )
        return result
