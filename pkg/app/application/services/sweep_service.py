"""Evaluation and sweep application service.

Evaluation regenerates the test split's estimated inputs at the requested
SNR (same propagation and noise draws, different noise power) and scores a
model by the mean per-sample NMSE of its extrapolated vectors.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from app.application.services.dataset_service import DatasetService
from app.application.services.training_service import TrainingService
from app.core.metrics import RunMetrics
from app.domain.entities import Dataset, ModelKind
from app.domain.evaluation import nmse, to_db
from app.domain.extrapolator import Extrapolator
from app.errors import ConfigurationError, InvalidArgumentError
from app.ports.checkpoint_store import CheckpointStorePort
from app.schemas.experiment import ExperimentConfig, SweepAxis
from app.schemas.results import SweepResult, SweepRow

logger = logging.getLogger(__name__)

ModelSink = Callable[[ExperimentConfig, ModelKind, Extrapolator], None]


@dataclass(frozen=True)
class Evaluation:
    """Score of one model at one SNR on one test split."""

    nmse_linear: float
    estimation_nmse: float
    sample_count: int

    @property
    def nmse_db(self) -> float:
        return to_db(self.nmse_linear)


class SweepService:
    """Application service for evaluation and the SNR, antenna and mode sweeps."""

    def __init__(
        self,
        dataset_service: DatasetService,
        training_service: TrainingService,
        checkpoint_store: Optional[CheckpointStorePort] = None,
        metrics: Optional[RunMetrics] = None,
    ):
        """Initialize sweep service.

        Args:
            dataset_service: Builds datasets and regenerates test inputs
            training_service: Trains fresh models per sweep point
            checkpoint_store: Source of pre-trained models when training is disabled
            metrics: Optional run metrics receiving per-point NMSE
        """
        self.dataset_service = dataset_service
        self.training_service = training_service
        self.checkpoint_store = checkpoint_store
        self.metrics = metrics

    def evaluate(
        self,
        config: ExperimentConfig,
        model: Extrapolator,
        dataset: Dataset,
        snr_db: Optional[float] = None,
    ) -> Evaluation:
        """NMSE of ``model`` on the dataset's test split.

        With ``snr_db`` omitted the stored inputs are used as they are;
        otherwise the test inputs are regenerated at ``snr_db``.
        """
        indices = dataset.test_indices
        if indices.size == 0:
            raise InvalidArgumentError("Dataset has an empty test split")
        self.training_service.check_dataset(config, dataset)
        if snr_db is None:
            inputs, targets = dataset.split("test")
            _, _, composites = self.dataset_service.regenerate(
                config, indices, dataset.header.train_snr_db
            )
        else:
            inputs, targets, composites = self.dataset_service.regenerate(config, indices, snr_db)
        return Evaluation(
            nmse_linear=nmse(targets, model.predict(inputs)),
            estimation_nmse=nmse(composites, inputs),
            sample_count=int(indices.size),
        )

    def _models(
        self, config: ExperimentConfig, dataset: Dataset, sink: Optional[ModelSink]
    ) -> Dict[ModelKind, Extrapolator]:
        models: Dict[ModelKind, Extrapolator] = {}
        for kind in config.models:
            if kind is ModelKind.COPY or config.train:
                model, _ = self.training_service.train_model(config, dataset, kind)
            else:
                model = self._load(config, kind)
            if sink is not None and kind is not ModelKind.COPY:
                sink(config, kind, model)
            models[kind] = model
        return models

    def _check_model_source(self, config: ExperimentConfig) -> None:
        location = config.model_path
        if location is None or self.checkpoint_store is None or not self.checkpoint_store.exists(
            location
        ):
            raise ConfigurationError(
                "Training is disabled and no trained model is available",
                {"model_path": location},
            )

    def _load(self, config: ExperimentConfig, kind: ModelKind) -> Extrapolator:
        self._check_model_source(config)
        location = config.model_path
        model = self.checkpoint_store.load(location)
        if model.kind is not kind:
            raise ConfigurationError(
                "Stored model family does not match the requested one",
                {"stored": model.kind.value, "requested": kind.value},
            )
        expected = config.network_dims() if kind is ModelKind.PRNET else config.baseline_dims()
        if model.network.dims != expected:
            raise ConfigurationError(
                "Stored model dimensions do not match the configuration",
                {"stored": model.network.dims, "expected": expected},
            )
        return model

    def _row(
        self,
        axis: SweepAxis,
        value: float,
        kind: ModelKind,
        model: Extrapolator,
        result: Evaluation,
    ) -> SweepRow:
        row = SweepRow(
            value=value,
            model=kind,
            nmse_linear=result.nmse_linear,
            nmse_db=result.nmse_db,
            sample_count=result.sample_count,
            parameter_count=model.parameter_count(),
            estimation_nmse_db=to_db(result.estimation_nmse),
        )
        if self.metrics is not None:
            self.metrics.record_nmse(kind.value, axis.column, value, row.nmse_db)
        logger.info(
            "Sweep point finished",
            extra={
                "axis": axis.value,
                "value": value,
                "model": kind.value,
                "nmse_db": row.nmse_db,
                "estimation_nmse_db": row.estimation_nmse_db,
            },
        )
        return row

    def run_snr_sweep(
        self,
        config: ExperimentConfig,
        dataset: Optional[Dataset] = None,
        models: Optional[Dict[ModelKind, Extrapolator]] = None,
        sink: Optional[ModelSink] = None,
    ) -> SweepResult:
        """Train once at the training SNR, then evaluate at every ``snr_values`` entry."""
        if config.P < 2:
            raise InvalidArgumentError("Nothing to extrapolate with a single mode", {"P": config.P})
        needs_checkpoint = any(kind is not ModelKind.COPY for kind in config.models)
        if models is None and not config.train and needs_checkpoint:
            self._check_model_source(config)
        dataset = dataset or self.dataset_service.build_dataset(config)
        models = models or self._models(config, dataset, sink)
        rows: List[SweepRow] = []
        for snr_db in config.snr_values:
            for kind, model in models.items():
                result = self.evaluate(config, model, dataset, snr_db)
                rows.append(self._row(SweepAxis.SNR, snr_db, kind, model, result))
        return SweepResult(axis=SweepAxis.SNR, rows=rows, config_checksum=config.checksum())

    def _require_training(self, config: ExperimentConfig, axis: SweepAxis) -> None:
        if not config.train and any(kind is not ModelKind.COPY for kind in config.models):
            raise ConfigurationError(
                "Dimension sweeps train a fresh model per point; training is disabled",
                {"axis": axis.value},
            )

    def _point(
        self,
        axis: SweepAxis,
        value: int,
        point_config: ExperimentConfig,
        sink: Optional[ModelSink],
    ) -> List[SweepRow]:
        dataset = self.dataset_service.build_dataset(point_config)
        rows = []
        for kind, model in self._models(point_config, dataset, sink).items():
            result = self.evaluate(point_config, model, dataset, point_config.eval_snr_db)
            rows.append(self._row(axis, value, kind, model, result))
        return rows

    def run_antenna_sweep(
        self, config: ExperimentConfig, sink: Optional[ModelSink] = None
    ) -> SweepResult:
        """Fresh dataset and model per antenna count, evaluated at ``eval_snr_db``."""
        self._require_training(config, SweepAxis.ANTENNAS)
        if config.P < 2:
            raise InvalidArgumentError("Nothing to extrapolate with a single mode", {"P": config.P})
        for M in config.antenna_values:
            if M < config.P:
                raise InvalidArgumentError(
                    "Antenna count below the mode count", {"M": M, "P": config.P}
                )
        rows: List[SweepRow] = []
        for M in config.antenna_values:
            rows.extend(self._point(SweepAxis.ANTENNAS, M, config.with_overrides(M=M), sink))
        return SweepResult(axis=SweepAxis.ANTENNAS, rows=rows, config_checksum=config.checksum())

    def run_mode_sweep(
        self, config: ExperimentConfig, sink: Optional[ModelSink] = None
    ) -> SweepResult:
        """Fresh gain model, dataset and network per mode count."""
        self._require_training(config, SweepAxis.MODES)
        for P in config.mode_values:
            if P < 2:
                raise InvalidArgumentError("Nothing to extrapolate with a single mode", {"P": P})
            if P > config.M:
                raise InvalidArgumentError(
                    "Mode count exceeds the antenna count", {"M": config.M, "P": P}
                )
        rows: List[SweepRow] = []
        for P in config.mode_values:
            rows.extend(self._point(SweepAxis.MODES, P, config.with_overrides(P=P), sink))
        return SweepResult(axis=SweepAxis.MODES, rows=rows, config_checksum=config.checksum())

    def run(
        self, config: ExperimentConfig, axis: SweepAxis, sink: Optional[ModelSink] = None
    ) -> SweepResult:
        axis = SweepAxis(axis)
        if axis is SweepAxis.SNR:
            return self.run_snr_sweep(config, sink=sink)
        if axis is SweepAxis.ANTENNAS:
            return self.run_antenna_sweep(config, sink=sink)
        return self.run_mode_sweep(config, sink=sink)
