"""In-memory checkpoint store for testing."""

from typing import Dict

from app.adapters.binary.checkpoint_file import decode_checkpoint, encode_checkpoint
from app.domain.extrapolator import NetworkExtrapolator
from app.errors import FormatError
from app.ports.checkpoint_store import CheckpointStorePort


class InMemoryCheckpointStore(CheckpointStorePort):
    """Keeps encoded checkpoints in a dict."""

    def __init__(self):
        """Initialize in-memory storage."""
        self._blobs: Dict[str, bytes] = {}

    def save(self, model: NetworkExtrapolator, location: str) -> str:
        self._blobs[location] = encode_checkpoint(model)
        return location

    def load(self, location: str) -> NetworkExtrapolator:
        if location not in self._blobs:
            raise FormatError(f"No checkpoint stored at {location}", {"offset": 0})
        return decode_checkpoint(self._blobs[location])

    def exists(self, location: str) -> bool:
        return location in self._blobs
