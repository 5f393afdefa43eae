"""Training application service.

Turns a dataset into a trained extrapolator: picks the network family,
derives initialization and shuffle seeds, normalizes with a single global
scale taken from the training split and runs mini-batch ADAM.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from app.core.metrics import RunMetrics
from app.domain.entities import Dataset, ModelKind, TrainReport
from app.domain.estimation import partition_antennas
from app.domain.extrapolator import (
    Extrapolator,
    NativeCopyExtrapolator,
    NetworkExtrapolator,
    normalization_scale,
)
from app.domain.layout import VectorLayout
from app.domain.networks import FeedforwardNetwork, init_network, init_real_network
from app.domain.seeding import derive_seed
from app.domain.training import TrainingHyperparams, train
from app.errors import ConfigurationError
from app.schemas.experiment import ExperimentConfig

logger = logging.getLogger(__name__)

# child index of the init/shuffle streams per model family
MODEL_STREAMS = {ModelKind.PRNET: 0, ModelKind.DNN: 1}


def model_seeds(config: ExperimentConfig, kind: ModelKind) -> dict:
    index = MODEL_STREAMS[kind]
    return {
        "init": derive_seed(config.seed, "init", index),
        "shuffle": derive_seed(config.seed, "shuffle", index),
    }


def layout_for(config: ExperimentConfig) -> VectorLayout:
    return VectorLayout.for_group_map(config.N, partition_antennas(config.M, config.P))


class TrainingService:
    """Application service for training extrapolators."""

    def __init__(self, metrics: Optional[RunMetrics] = None):
        """Initialize training service.

        Args:
            metrics: Optional run metrics receiving per-epoch loss and duration
        """
        self.metrics = metrics

    def init_model(self, config: ExperimentConfig, kind: ModelKind) -> FeedforwardNetwork:
        seeds = model_seeds(config, kind)
        if kind is ModelKind.PRNET:
            return init_network(config.network_dims(), seeds["init"])
        return init_real_network(config.baseline_dims(), seeds["init"])

    @staticmethod
    def check_dataset(config: ExperimentConfig, dataset: Dataset) -> None:
        header = dataset.header
        if (header.M, header.N, header.P) != (config.M, config.N, config.P):
            raise ConfigurationError(
                "Dataset dimensions do not match the configuration",
                {
                    "dataset": {"M": header.M, "N": header.N, "P": header.P},
                    "config": {"M": config.M, "N": config.N, "P": config.P},
                },
            )
        if header.master_seed != config.seed:
            raise ConfigurationError(
                "Dataset was generated from a different master seed",
                {"dataset": header.master_seed, "config": config.seed},
            )
        if header.generator_params() != config.generator_params():
            raise ConfigurationError(
                "Dataset channel-generator parameters do not match the configuration",
                {"dataset": header.generator_params(), "config": config.generator_params()},
            )

    def train_model(
        self, config: ExperimentConfig, dataset: Dataset, kind: ModelKind
    ) -> Tuple[Extrapolator, TrainReport]:
        """Train a model of family ``kind`` on the dataset's training split.

        The native-copy reference has nothing to train and comes back with an
        empty report.
        """
        kind = ModelKind(kind)
        self.check_dataset(config, dataset)
        if kind is ModelKind.COPY:
            return NativeCopyExtrapolator(layout_for(config)), TrainReport()

        train_inputs, train_targets = dataset.split("train")
        test_inputs, test_targets = dataset.split("test")
        train_inputs = train_inputs.astype(np.complex128)
        train_targets = train_targets.astype(np.complex128)

        model = NetworkExtrapolator(
            network=self.init_model(config, kind),
            scale=normalization_scale(train_inputs, train_targets),
        )
        validation = None
        if test_inputs.shape[0] > 0:
            validation = (model.encode_inputs(test_inputs), model.encode_targets(test_targets))

        hyperparams = TrainingHyperparams(
            lr=config.learning_rate,
            batch_size=config.batch_size,
            epochs=config.epochs,
            shuffle_seed=model_seeds(config, kind)["shuffle"],
            beta1=config.beta1,
            beta2=config.beta2,
            eps=config.adam_eps,
        )
        logger.info(
            "Training started",
            extra={
                "model": kind.value,
                "dims": model.network.dims,
                "parameters": model.parameter_count(),
                "train_samples": int(train_inputs.shape[0]),
                "epochs": config.epochs,
                "scale": model.scale,
            },
        )

        def on_epoch(epoch: int, report: TrainReport) -> None:
            loss = report.train_loss[-1]
            seconds = report.epoch_seconds[-1]
            if self.metrics is not None:
                self.metrics.record_epoch(kind.value, seconds, loss)
            extra = {"model": kind.value, "epoch": epoch + 1, "loss": loss, "seconds": seconds}
            if report.validation_nmse:
                extra["validation_nmse"] = report.validation_nmse[-1]
            logger.debug("Epoch finished", extra=extra)

        report = train(
            model.network,
            model.encode_inputs(train_inputs),
            model.encode_targets(train_targets),
            hyperparams,
            validation=validation,
            on_epoch=on_epoch,
        )
        logger.info(
            "Training finished",
            extra={
                "model": kind.value,
                "epochs": report.epochs,
                "final_loss": report.train_loss[-1] if report.train_loss else None,
                "checksum": report.parameter_checksum,
            },
        )
        return model, report
