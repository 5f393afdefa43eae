"""Extrapolate channel use case (the on-line deployment stage)."""

from functools import lru_cache

import numpy as np

from app.application.services.training_service import layout_for
from app.domain.extrapolator import extrapolate
from app.ports.checkpoint_store import CheckpointStorePort
from app.schemas.experiment import ExperimentConfig

DEFAULT_CACHED_MODELS = 4


class ExtrapolateChannelUseCase:
    """Use case for turning estimated composite channels into full N x M x P CSI."""

    def __init__(
        self, checkpoint_store: CheckpointStorePort, cached_models: int = DEFAULT_CACHED_MODELS
    ):
        """Initialize use case.

        Args:
            checkpoint_store: Loads stored models
            cached_models: Most recently used models kept in memory
        """
        self.checkpoint_store = checkpoint_store
        self._load = lru_cache(maxsize=cached_models)(checkpoint_store.load)

    def execute(
        self, config: ExperimentConfig, checkpoint_location: str, H_es: np.ndarray
    ) -> np.ndarray:
        """Extrapolate one N x M estimate (or a batch of them) with a stored model.

        Loaded models are not modified afterwards.
        """
        model = self._load(checkpoint_location)
        return extrapolate(model, H_es, layout_for(config))

    def clear_cache(self) -> None:
        self._load.cache_clear()
