"""Checkpoint store port - interface for persisting trained networks."""

from abc import ABC, abstractmethod

from app.domain.extrapolator import NetworkExtrapolator


class CheckpointStorePort(ABC):
    """Port for trained-model persistence."""

    @abstractmethod
    def save(self, model: NetworkExtrapolator, location: str) -> str:
        """Persist a network together with its normalization scale.

        Returns:
            The location actually written
        """
        pass

    @abstractmethod
    def load(self, location: str) -> NetworkExtrapolator:
        """Load a network stored at ``location``.

        Raises:
            FormatError: If the stored bytes cannot be decoded
        """
        pass

    @abstractmethod
    def exists(self, location: str) -> bool:
        pass
