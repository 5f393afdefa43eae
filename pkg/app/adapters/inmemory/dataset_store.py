"""In-memory dataset store for testing."""

from typing import Dict

from app.adapters.binary.dataset_file import decode_dataset, encode_dataset
from app.domain.entities import Dataset
from app.errors import FormatError
from app.ports.dataset_store import DatasetStorePort


class InMemoryDatasetStore(DatasetStorePort):
    """Keeps encoded dataset bytes in a dict so round-trips still go through the codec."""

    def __init__(self):
        """Initialize in-memory storage."""
        self._blobs: Dict[str, bytes] = {}

    def save(self, dataset: Dataset, location: str) -> str:
        self._blobs[location] = encode_dataset(dataset)
        return location

    def load(self, location: str) -> Dataset:
        if location not in self._blobs:
            raise FormatError(f"No dataset stored at {location}", {"offset": 0})
        return decode_dataset(self._blobs[location])

    def exists(self, location: str) -> bool:
        return location in self._blobs

    def get_blob(self, location: str) -> bytes:
        """Get the raw encoded bytes (for testing)."""
        return self._blobs[location]
