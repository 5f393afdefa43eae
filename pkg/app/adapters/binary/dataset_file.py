"""Binary dataset file codec (magic ``PRNC``).

Layout, all integers little-endian::

    magic "PRNC" | u32 format version
    u32 M | u32 N | u32 P | u32 S | u32 test numerator | u32 test denominator
    i32 train SNR (millibels) | u64 master seed | u32 layout version
    u32 length | UTF-8 JSON generator parameters
    S records of [h_es | h_pre] as (f32 Re, f32 Im) pairs
    u64 checksum (8-byte BLAKE2b of every preceding byte)

The train/test split is not stored; it is re-derived from the master seed.
"""

import hashlib
import json
import logging
import os
import struct
from pathlib import Path
from typing import Union

import numpy as np

from app.domain.dataset import assemble_dataset
from app.domain.entities import Dataset, DatasetHeader
from app.domain.layout import LAYOUT_VERSION
from app.errors import FormatError
from app.ports.dataset_store import DatasetStorePort

logger = logging.getLogger(__name__)

MAGIC = b"PRNC"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sIIIIIIIiQI")
LENGTH = struct.Struct("<I")
CHECKSUM = struct.Struct("<Q")
RECORD_DTYPE = np.dtype("<c8")


def checksum(payload: bytes) -> int:
    digest = hashlib.blake2b(payload, digest_size=CHECKSUM.size).digest()
    return CHECKSUM.unpack(digest)[0]


def _truncated(what: str, offset: int, expected: int, actual: int) -> FormatError:
    return FormatError(
        f"Dataset file truncated in {what}: expected {expected} bytes, got {actual}",
        {"offset": offset, "expected_size": expected, "actual_size": actual},
    )


def encode_dataset(dataset: Dataset) -> bytes:
    header = dataset.header
    generator = json.dumps(
        header.generator_params(), sort_keys=True, separators=(",", ":")
    ).encode("utf-8")
    records = np.concatenate([dataset.inputs, dataset.targets], axis=1).astype(RECORD_DTYPE)
    payload = b"".join(
        [
            HEADER.pack(
                MAGIC,
                FORMAT_VERSION,
                header.M,
                header.N,
                header.P,
                header.sample_count,
                header.test_numerator,
                header.test_denominator,
                header.train_snr_millibels,
                header.master_seed,
                header.layout_version,
            ),
            LENGTH.pack(len(generator)),
            generator,
            records.tobytes(),
        ]
    )
    return payload + CHECKSUM.pack(checksum(payload))


def decode_dataset(data: bytes) -> Dataset:
    """Decode dataset bytes.

    Raises:
        FormatError: On bad magic, unsupported versions, truncation or checksum mismatch
    """
    size = len(data)
    if size < HEADER.size:
        raise _truncated("header", size, HEADER.size, size)
    (magic, version, M, N, P, S, num, den, snr_mb, seed, layout) = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError(
            "Not a dataset file (bad magic)", {"offset": 0, "magic": magic.hex()}
        )
    if version != FORMAT_VERSION:
        raise FormatError(
            f"Unsupported dataset format version {version}",
            {"offset": 4, "version": version, "supported": FORMAT_VERSION},
        )
    if layout != LAYOUT_VERSION:
        raise FormatError(
            f"Unsupported vector layout version {layout}",
            {"offset": HEADER.size - 4, "layout_version": layout},
        )

    offset = HEADER.size
    if size < offset + LENGTH.size:
        raise _truncated("header", offset, offset + LENGTH.size, size)
    (json_length,) = LENGTH.unpack_from(data, offset)
    offset += LENGTH.size
    if size < offset + json_length:
        raise _truncated("generator parameters", offset, offset + json_length, size)
    try:
        generator = json.loads(data[offset : offset + json_length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(
            "Generator parameters are not valid JSON", {"offset": offset, "reason": str(exc)}
        ) from exc
    if not isinstance(generator, dict):
        raise FormatError("Generator parameters must be a JSON object", {"offset": offset})
    offset += json_length

    record_length = M * N * P
    expected = offset + S * record_length * RECORD_DTYPE.itemsize + CHECKSUM.size
    if size < expected:
        raise _truncated("samples", offset, expected, size)
    if size > expected:
        raise FormatError(
            "Trailing bytes after dataset checksum",
            {"offset": expected, "expected_size": expected, "actual_size": size},
        )
    checksum_offset = expected - CHECKSUM.size
    (stored,) = CHECKSUM.unpack_from(data, checksum_offset)
    if stored != checksum(data[:checksum_offset]):
        raise FormatError("Dataset checksum mismatch", {"offset": checksum_offset})

    records = np.frombuffer(data, dtype=RECORD_DTYPE, count=S * record_length, offset=offset)
    records = records.reshape(S, record_length).astype(np.complex64)
    header = DatasetHeader(
        M=M,
        N=N,
        P=P,
        sample_count=S,
        test_numerator=num,
        test_denominator=den,
        train_snr_millibels=snr_mb,
        master_seed=seed,
        layout_version=layout,
        generator=tuple(sorted(generator.items())),
        format_version=version,
    )
    try:
        return assemble_dataset(header, records[:, : M * N], records[:, M * N :])
    except ValueError as exc:
        raise FormatError(
            "Dataset header is inconsistent", {"offset": 4, "reason": str(exc)}
        ) from exc


def write_dataset(dataset: Dataset, path: Union[str, Path]) -> Path:
    """Write a dataset file atomically (temporary file, then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = encode_dataset(dataset)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
    logger.info(
        "Dataset written",
        extra={"path": str(path), "bytes": len(data), "samples": dataset.sample_count},
    )
    return path


def read_dataset(path: Union[str, Path]) -> Dataset:
    path = Path(path)
    if not path.is_file():
        raise FormatError(f"Dataset file not found: {path}", {"offset": 0, "path": str(path)})
    return decode_dataset(path.read_bytes())


class BinaryDatasetStore(DatasetStorePort):
    """File-backed dataset store using the ``PRNC`` codec."""

    def save(self, dataset: Dataset, location: str) -> str:
        return str(write_dataset(dataset, location))

    def load(self, location: str) -> Dataset:
        return read_dataset(location)

    def exists(self, location: str) -> bool:
        return Path(location).is_file()
