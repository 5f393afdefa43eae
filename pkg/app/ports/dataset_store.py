"""Dataset store port - interface for persisting generated datasets."""

from abc import ABC, abstractmethod

from app.domain.entities import Dataset


class DatasetStorePort(ABC):
    """Port for dataset persistence."""

    @abstractmethod
    def save(self, dataset: Dataset, location: str) -> str:
        """Persist a dataset.

        Args:
            dataset: The dataset to store
            location: Where to store it (a path for file-backed stores)

        Returns:
            The location actually written
        """
        pass

    @abstractmethod
    def load(self, location: str) -> Dataset:
        """Load a dataset previously stored at ``location``.

        Raises:
            FormatError: If the stored bytes cannot be decoded
        """
        pass

    @abstractmethod
    def exists(self, location: str) -> bool:
        pass
