"""
Unit tests for app.adapters.binary.dataset_file module.
Tests the PRNC codec and its failure reporting.
"""

import struct

import numpy as np
import pytest

from app.adapters.binary.dataset_file import (
    CHECKSUM,
    HEADER,
    BinaryDatasetStore,
    decode_dataset,
    encode_dataset,
    read_dataset,
    write_dataset,
)
from app.domain.dataset import assemble_dataset
from app.domain.entities import DatasetHeader
from app.errors import FormatError
from tests.conftest import complex_randn

pytestmark = pytest.mark.unit


@pytest.fixture
def dataset(rng):
    """Five-sample dataset for M=3, N=2, P=2."""
    header = DatasetHeader(
        M=3, N=2, P=2, sample_count=5, test_numerator=2, test_denominator=5,
        train_snr_millibels=-250, master_seed=2**63 + 5,
        generator=(("n_clusters", 4), ("ray_spread_deg", 7.5)),
    )
    return assemble_dataset(header, complex_randn(rng, (5, 6)), complex_randn(rng, (5, 6)))


class TestDatasetCodec:
    """Test suite for encode_dataset and decode_dataset."""

    def test_round_trip(self, dataset):
        """Test decoding restores header, samples and split."""
        decoded = decode_dataset(encode_dataset(dataset))

        assert decoded.header == dataset.header
        assert decoded.header.train_snr_db == -2.5
        np.testing.assert_array_equal(decoded.inputs, dataset.inputs)
        np.testing.assert_array_equal(decoded.targets, dataset.targets)
        np.testing.assert_array_equal(decoded.test_indices, dataset.test_indices)

    def test_size(self, dataset):
        """Test the encoded size follows header, JSON, records and checksum."""
        data = encode_dataset(dataset)
        (json_length,) = struct.unpack_from("<I", data, HEADER.size)

        assert len(data) == HEADER.size + 4 + json_length + 5 * 12 * 8 + CHECKSUM.size

    def test_bad_magic(self, dataset):
        """Test a foreign file is rejected at offset 0."""
        data = b"XXXX" + encode_dataset(dataset)[4:]

        with pytest.raises(FormatError) as exc_info:
            decode_dataset(data)

        assert exc_info.value.details["offset"] == 0
        assert exc_info.value.details["magic"] == b"XXXX".hex()

    def test_unsupported_version(self, dataset):
        """Test an unknown format version is rejected."""
        data = bytearray(encode_dataset(dataset))
        data[4:8] = struct.pack("<I", 99)

        with pytest.raises(FormatError, match="version 99"):
            decode_dataset(bytes(data))

    def test_truncated(self, dataset):
        """Test truncation reports expected and actual sizes."""
        data = encode_dataset(dataset)

        with pytest.raises(FormatError) as exc_info:
            decode_dataset(data[:-20])

        details = exc_info.value.details
        assert details["expected_size"] == len(data)
        assert details["actual_size"] == len(data) - 20

    def test_truncated_header(self):
        """Test a file shorter than the header is rejected."""
        with pytest.raises(FormatError) as exc_info:
            decode_dataset(b"PRNC")

        assert exc_info.value.details["expected_size"] == HEADER.size

    def test_checksum_mismatch(self, dataset):
        """Test a flipped sample byte fails the checksum."""
        data = bytearray(encode_dataset(dataset))
        data[-CHECKSUM.size - 3] ^= 0xFF

        with pytest.raises(FormatError, match="checksum"):
            decode_dataset(bytes(data))

    def test_trailing_bytes(self, dataset):
        """Test bytes after the checksum are rejected."""
        with pytest.raises(FormatError, match="Trailing"):
            decode_dataset(encode_dataset(dataset) + b"\x00")


class TestDatasetFiles:
    """Test suite for file-backed dataset storage."""

    def test_write_read(self, dataset, tmp_path):
        """Test a written file reads back and leaves no temporary file."""
        path = write_dataset(dataset, tmp_path / "nested" / "data.prnc")

        assert read_dataset(path).header == dataset.header
        assert list(path.parent.iterdir()) == [path]

    def test_missing_file(self, tmp_path):
        """Test reading a missing file raises a format error."""
        with pytest.raises(FormatError, match="not found"):
            read_dataset(tmp_path / "missing.prnc")

    def test_store(self, dataset, tmp_path):
        """Test the store port over files."""
        store = BinaryDatasetStore()
        location = store.save(dataset, str(tmp_path / "d.prnc"))

        assert store.exists(location)
        assert not store.exists(str(tmp_path / "other.prnc"))
        assert store.load(location).sample_count == 5
