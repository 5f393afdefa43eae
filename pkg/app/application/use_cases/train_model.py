"""Train model use case."""

from dataclasses import dataclass
from typing import Optional

from app.application.services.dataset_service import DatasetService, seed_manifest
from app.application.services.training_service import TrainingService
from app.domain.entities import Dataset, ModelKind, TrainReport
from app.domain.extrapolator import NetworkExtrapolator
from app.errors import InvalidArgumentError
from app.ports.checkpoint_store import CheckpointStorePort
from app.ports.dataset_store import DatasetStorePort
from app.ports.run_recorder import RunRecorderPort
from app.schemas.experiment import ExperimentConfig

CHECKPOINT_SUFFIX = {ModelKind.PRNET: "prnw", ModelKind.DNN: "prnr"}


def checkpoint_name(kind: ModelKind, tag: str = "") -> str:
    kind = ModelKind(kind)
    stem = f"model_{tag}_{kind.value}" if tag else f"model_{kind.value}"
    return f"{stem}.{CHECKPOINT_SUFFIX[kind]}"


@dataclass
class TrainOutcome:
    model: NetworkExtrapolator
    report: TrainReport
    dataset: Dataset
    checkpoint_location: str


class TrainModelUseCase:
    """Use case for training a network on a stored or freshly built dataset."""

    def __init__(
        self,
        dataset_service: DatasetService,
        training_service: TrainingService,
        dataset_store: DatasetStorePort,
        checkpoint_store: CheckpointStorePort,
        run_recorder: RunRecorderPort,
    ):
        """Initialize use case.

        Args:
            dataset_service: Builds the dataset when none is given
            training_service: Trains the network
            dataset_store: Loads a previously generated dataset
            checkpoint_store: Persists the trained network
            run_recorder: Records config, seeds and training summary
        """
        self.dataset_service = dataset_service
        self.training_service = training_service
        self.dataset_store = dataset_store
        self.checkpoint_store = checkpoint_store
        self.run_recorder = run_recorder

    def execute(
        self,
        config: ExperimentConfig,
        kind: ModelKind = ModelKind.PRNET,
        dataset_location: Optional[str] = None,
    ) -> TrainOutcome:
        """Execute the use case.

        Args:
            config: Validated experiment configuration
            kind: Network family to train
            dataset_location: Stored dataset to train on; built from ``config`` when omitted

        Returns:
            The trained model, its report, the dataset and the checkpoint location
        """
        kind = ModelKind(kind)
        if kind not in CHECKPOINT_SUFFIX:
            raise InvalidArgumentError(
                "Only network models can be trained", {"model": kind.value}
            )
        self.run_recorder.record_config(config)
        self.run_recorder.record_seeds(seed_manifest(config))
        if dataset_location is not None:
            dataset = self.dataset_store.load(dataset_location)
        else:
            dataset = self.dataset_service.build_dataset(config)
        model, report = self.training_service.train_model(config, dataset, kind)
        location = self.checkpoint_store.save(
            model, self.run_recorder.artifact_path(checkpoint_name(kind))
        )
        self.run_recorder.record_summary(
            {
                f"train_{kind.value}": {
                    "checkpoint": location,
                    "epochs": report.epochs,
                    "train_loss": report.train_loss,
                    "validation_nmse": report.validation_nmse,
                    "parameter_checksum": report.parameter_checksum,
                    "parameter_count": model.parameter_count(),
                    "scale": model.scale,
                }
            }
        )
        return TrainOutcome(
            model=model, report=report, dataset=dataset, checkpoint_location=location
        )
