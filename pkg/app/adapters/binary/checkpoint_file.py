"""Binary checkpoint codec for trained networks.

``PRNW`` holds a complex network, ``PRNR`` a real baseline. Layout, all
little-endian::

    magic | u32 format version | u32 count (layers + 1) | u32 dims[count]
    f64 normalization scale
    per layer: W row-major, then b; complex arrays store the Re block then the Im block
    u64 checksum (8-byte BLAKE2b of every preceding byte)
"""

import logging
import os
import struct
from pathlib import Path
from typing import List, Union

import numpy as np

from app.adapters.binary.dataset_file import CHECKSUM, checksum
from app.domain.extrapolator import NetworkExtrapolator
from app.domain.networks import ComplexNetwork, FeedforwardNetwork, LayerParams, RealNetwork
from app.errors import FormatError
from app.ports.checkpoint_store import CheckpointStorePort

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
PREAMBLE = struct.Struct("<4sII")
SCALE = struct.Struct("<d")
FLOAT = np.dtype("<f8")
NETWORKS = {cls.magic: cls for cls in (ComplexNetwork, RealNetwork)}


def _array_bytes(array: np.ndarray, is_complex: bool) -> bytes:
    if is_complex:
        return array.real.astype(FLOAT).tobytes() + array.imag.astype(FLOAT).tobytes()
    return array.astype(FLOAT).tobytes()


def encode_checkpoint(model: NetworkExtrapolator) -> bytes:
    network = model.network
    is_complex = isinstance(network, ComplexNetwork)
    dims = network.dims
    parts = [
        PREAMBLE.pack(network.magic, FORMAT_VERSION, len(dims)),
        struct.pack(f"<{len(dims)}I", *dims),
        SCALE.pack(model.scale),
    ]
    for layer in network.layers:
        parts.append(_array_bytes(layer.W, is_complex))
        parts.append(_array_bytes(layer.b, is_complex))
    payload = b"".join(parts)
    return payload + CHECKSUM.pack(checksum(payload))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, count: int, what: str) -> int:
        start = self.offset
        if start + count > len(self.data):
            raise FormatError(
                f"Checkpoint truncated in {what}",
                {
                    "offset": start,
                    "expected_size": start + count,
                    "actual_size": len(self.data),
                },
            )
        self.offset += count
        return start

    def array(self, shape, is_complex: bool, what: str) -> np.ndarray:
        count = int(np.prod(shape))
        parts = 2 if is_complex else 1
        start = self.take(parts * count * FLOAT.itemsize, what)
        flat = np.frombuffer(self.data, dtype=FLOAT, count=parts * count, offset=start)
        if is_complex:
            return (flat[:count] + 1j * flat[count:]).reshape(shape)
        return flat.astype(np.float64).reshape(shape)


def decode_checkpoint(data: bytes) -> NetworkExtrapolator:
    """Decode checkpoint bytes.

    Raises:
        FormatError: On bad magic, unsupported versions, truncation or checksum mismatch
    """
    reader = _Reader(data)
    magic, version, count = PREAMBLE.unpack_from(data, reader.take(PREAMBLE.size, "preamble"))
    if magic not in NETWORKS:
        raise FormatError("Not a checkpoint file (bad magic)", {"offset": 0, "magic": magic.hex()})
    if version != FORMAT_VERSION:
        raise FormatError(
            f"Unsupported checkpoint format version {version}",
            {"offset": 4, "version": version, "supported": FORMAT_VERSION},
        )
    if count < 2:
        raise FormatError("Checkpoint declares fewer than two layer widths", {"offset": 8})
    dims_offset = reader.take(4 * count, "dims")
    dims: List[int] = list(struct.unpack_from(f"<{count}I", data, dims_offset))
    if min(dims) < 1:
        raise FormatError("Checkpoint declares a zero layer width", {"offset": dims_offset})
    (scale,) = SCALE.unpack_from(data, reader.take(SCALE.size, "scale"))

    cls = NETWORKS[magic]
    is_complex = cls is ComplexNetwork
    layers = []
    for k, (n_in, n_out) in enumerate(zip(dims, dims[1:])):
        W = reader.array((n_out, n_in), is_complex, f"layer {k} weights")
        b = reader.array((n_out,), is_complex, f"layer {k} bias")
        layers.append(LayerParams(W=W, b=b, has_activation=k < len(dims) - 2))

    checksum_offset = reader.take(CHECKSUM.size, "checksum")
    if reader.offset != len(data):
        raise FormatError(
            "Trailing bytes after checkpoint checksum",
            {"offset": reader.offset, "expected_size": reader.offset, "actual_size": len(data)},
        )
    (stored,) = CHECKSUM.unpack_from(data, checksum_offset)
    if stored != checksum(data[:checksum_offset]):
        raise FormatError("Checkpoint checksum mismatch", {"offset": checksum_offset})

    network: FeedforwardNetwork = cls(layers)
    try:
        return NetworkExtrapolator(network=network, scale=scale)
    except ValueError as exc:
        raise FormatError(
            "Checkpoint normalization scale is invalid", {"offset": dims_offset + 4 * count}
        ) from exc


def write_checkpoint(model: NetworkExtrapolator, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = encode_checkpoint(model)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
    logger.info(
        "Checkpoint written",
        extra={"path": str(path), "model": model.kind.value, "dims": model.network.dims},
    )
    return path


def read_checkpoint(path: Union[str, Path]) -> NetworkExtrapolator:
    path = Path(path)
    if not path.is_file():
        raise FormatError(f"Checkpoint file not found: {path}", {"offset": 0, "path": str(path)})
    return decode_checkpoint(path.read_bytes())


class BinaryCheckpointStore(CheckpointStorePort):
    """File-backed checkpoint store using the ``PRNW``/``PRNR`` codec."""

    def save(self, model: NetworkExtrapolator, location: str) -> str:
        return str(write_checkpoint(model, location))

    def load(self, location: str) -> NetworkExtrapolator:
        return read_checkpoint(location)

    def exists(self, location: str) -> bool:
        return Path(location).is_file()
