"""Composition root - wires dependencies for different environments."""

from pathlib import Path
from typing import Optional, Union

from app.adapters.binary.checkpoint_file import BinaryCheckpointStore
from app.adapters.binary.dataset_file import BinaryDatasetStore
from app.adapters.filesystem.run_recorder import FilesystemRunRecorder
from app.adapters.inmemory.checkpoint_store import InMemoryCheckpointStore
from app.adapters.inmemory.dataset_store import InMemoryDatasetStore
from app.adapters.inmemory.run_recorder import InMemoryRunRecorder
from app.application.services.dataset_service import DatasetService
from app.application.services.sweep_service import SweepService
from app.application.services.training_service import TrainingService
from app.application.use_cases.evaluate_model import EvaluateModelUseCase
from app.application.use_cases.extrapolate_channel import ExtrapolateChannelUseCase
from app.application.use_cases.generate_dataset import GenerateDatasetUseCase
from app.application.use_cases.inspect_artifact import InspectArtifactUseCase
from app.application.use_cases.run_sweep import RunSweepUseCase
from app.application.use_cases.train_model import TrainModelUseCase
from app.core.metrics import RunMetrics
from app.ports.checkpoint_store import CheckpointStorePort
from app.ports.dataset_store import DatasetStorePort
from app.ports.run_recorder import RunRecorderPort


def _build_services(
    dataset_store: DatasetStorePort,
    checkpoint_store: CheckpointStorePort,
    run_recorder: RunRecorderPort,
    metrics: Optional[RunMetrics],
    workers: Optional[int],
) -> dict:
    # Create application services
    dataset_service = DatasetService(metrics=metrics, workers=workers)
    training_service = TrainingService(metrics=metrics)
    sweep_service = SweepService(
        dataset_service=dataset_service,
        training_service=training_service,
        checkpoint_store=checkpoint_store,
        metrics=metrics,
    )

    # Create use cases
    generate_dataset_use_case = GenerateDatasetUseCase(
        dataset_service=dataset_service,
        dataset_store=dataset_store,
        run_recorder=run_recorder,
    )
    train_model_use_case = TrainModelUseCase(
        dataset_service=dataset_service,
        training_service=training_service,
        dataset_store=dataset_store,
        checkpoint_store=checkpoint_store,
        run_recorder=run_recorder,
    )
    evaluate_model_use_case = EvaluateModelUseCase(
        sweep_service=sweep_service,
        dataset_service=dataset_service,
        dataset_store=dataset_store,
        checkpoint_store=checkpoint_store,
        run_recorder=run_recorder,
    )
    run_sweep_use_case = RunSweepUseCase(
        sweep_service=sweep_service,
        checkpoint_store=checkpoint_store,
        run_recorder=run_recorder,
    )
    inspect_artifact_use_case = InspectArtifactUseCase(
        dataset_store=dataset_store,
        checkpoint_store=checkpoint_store,
    )
    extrapolate_channel_use_case = ExtrapolateChannelUseCase(checkpoint_store=checkpoint_store)

    return {
        "dataset_service": dataset_service,
        "training_service": training_service,
        "sweep_service": sweep_service,
        "dataset_store": dataset_store,
        "checkpoint_store": checkpoint_store,
        "run_recorder": run_recorder,
        "metrics": metrics,
        "generate_dataset_use_case": generate_dataset_use_case,
        "train_model_use_case": train_model_use_case,
        "evaluate_model_use_case": evaluate_model_use_case,
        "run_sweep_use_case": run_sweep_use_case,
        "inspect_artifact_use_case": inspect_artifact_use_case,
        "extrapolate_channel_use_case": extrapolate_channel_use_case,
    }


def build_filesystem_services(
    run_dir: Union[str, Path],
    metrics: Optional[RunMetrics] = None,
    workers: Optional[int] = None,
) -> dict:
    """Build services writing artifacts below ``run_dir``.

    Returns:
        Dictionary of services and use cases
    """
    return _build_services(
        dataset_store=BinaryDatasetStore(),
        checkpoint_store=BinaryCheckpointStore(),
        run_recorder=FilesystemRunRecorder(run_dir),
        metrics=metrics,
        workers=workers,
    )


def build_in_memory_services(
    metrics: Optional[RunMetrics] = None, workers: Optional[int] = None
) -> dict:
    """Build services with in-memory adapters for testing.

    Returns:
        Dictionary of services and use cases
    """
    return _build_services(
        dataset_store=InMemoryDatasetStore(),
        checkpoint_store=InMemoryCheckpointStore(),
        run_recorder=InMemoryRunRecorder(),
        metrics=metrics,
        workers=workers,
    )


def build_inspector() -> InspectArtifactUseCase:
    """Artifact inspector over the file-backed stores; writes nothing."""
    return InspectArtifactUseCase(
        dataset_store=BinaryDatasetStore(),
        checkpoint_store=BinaryCheckpointStore(),
    )
