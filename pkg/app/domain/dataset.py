"""Deterministic train/test splitting of a stacked sample set."""

from typing import Tuple

import numpy as np

from app.domain.entities import Dataset, DatasetHeader
from app.domain.seeding import make_rng
from app.errors import InvalidArgumentError


def held_out_count(sample_count: int, numerator: int, denominator: int) -> int:
    """floor(S * numerator / denominator) in exact integer arithmetic."""
    if denominator <= 0 or not 0 <= numerator <= denominator:
        raise InvalidArgumentError(
            "Test fraction must lie in [0, 1]",
            {"numerator": numerator, "denominator": denominator},
        )
    return sample_count * numerator // denominator


def split_indices(
    sample_count: int, numerator: int, denominator: int, master_seed: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted (train, test) index arrays from a seeded permutation."""
    if sample_count < 1:
        raise InvalidArgumentError("A dataset needs at least one sample", {"S": sample_count})
    n_test = held_out_count(sample_count, numerator, denominator)
    order = make_rng(master_seed, "split").permutation(sample_count)
    return np.sort(order[n_test:]), np.sort(order[:n_test])


def assemble_dataset(header: DatasetHeader, inputs: np.ndarray, targets: np.ndarray) -> Dataset:
    """Wrap stacked samples in a Dataset with the header's deterministic split."""
    train, test = split_indices(
        header.sample_count, header.test_numerator, header.test_denominator, header.master_seed
    )
    return Dataset(
        header=header,
        inputs=np.asarray(inputs, dtype=np.complex64),
        targets=np.asarray(targets, dtype=np.complex64),
        train_indices=train,
        test_indices=test,
    )
