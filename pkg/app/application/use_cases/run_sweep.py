"""Run sweep use case."""

from app.application.services.dataset_service import seed_manifest
from app.application.services.sweep_service import SweepService
from app.application.use_cases.train_model import checkpoint_name
from app.domain.entities import ModelKind
from app.domain.extrapolator import Extrapolator
from app.ports.checkpoint_store import CheckpointStorePort
from app.ports.run_recorder import RunRecorderPort
from app.schemas.experiment import ExperimentConfig, SweepAxis
from app.schemas.results import SweepResult

_AXIS_FIELD = {SweepAxis.ANTENNAS: "M", SweepAxis.MODES: "P"}


class RunSweepUseCase:
    """Use case for running one sweep and recording its table and checkpoints."""

    def __init__(
        self,
        sweep_service: SweepService,
        checkpoint_store: CheckpointStorePort,
        run_recorder: RunRecorderPort,
    ):
        """Initialize use case.

        Args:
            sweep_service: Runs the sweep
            checkpoint_store: Persists every model trained along the way
            run_recorder: Records config, seeds, the CSV table and summary
        """
        self.sweep_service = sweep_service
        self.checkpoint_store = checkpoint_store
        self.run_recorder = run_recorder

    def execute(self, config: ExperimentConfig, axis: SweepAxis) -> SweepResult:
        """Execute the use case."""
        axis = SweepAxis(axis)
        self.run_recorder.record_config(config)
        self.run_recorder.record_seeds(seed_manifest(config))

        def keep(point: ExperimentConfig, kind: ModelKind, model: Extrapolator) -> None:
            if not point.train:
                return
            tag = ""
            if axis is not SweepAxis.SNR:
                tag = f"{axis.value}{getattr(point, _AXIS_FIELD[axis])}"
            location = self.run_recorder.artifact_path(checkpoint_name(kind, tag))
            self.checkpoint_store.save(model, location)

        result = self.sweep_service.run(config, axis, sink=keep)
        self.run_recorder.record_result(result)
        return result
