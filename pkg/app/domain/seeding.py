"""Hierarchical seed derivation.

All randomness of an experiment flows from one master seed. A labelled path
such as ``("sample", 17)`` selects an independent stream through
``numpy.random.SeedSequence`` spawn keys, so any stream can be recreated
without replaying the others.
"""

from typing import Union

import numpy as np

from app.errors import InvalidArgumentError

STREAMS = {
    "paths": 1,
    "gains": 2,
    "calibration": 3,
    "sample": 4,
    "split": 5,
    "init": 6,
    "shuffle": 7,
    "noise": 8,
}

U64_MAX = 2**64 - 1

PathPart = Union[str, int]


def _spawn_key(path) -> tuple:
    key = []
    for part in path:
        if isinstance(part, str):
            if part not in STREAMS:
                raise InvalidArgumentError(f"Unknown seed stream: {part}")
            key.append(STREAMS[part])
        else:
            part = int(part)
            if part < 0:
                raise InvalidArgumentError("Seed path indices must be non-negative")
            key.append(part)
    return tuple(key)


def seed_sequence(seed: int, *path: PathPart) -> np.random.SeedSequence:
    if not 0 <= int(seed) <= U64_MAX:
        raise InvalidArgumentError("Seeds must fit in an unsigned 64-bit integer")
    return np.random.SeedSequence(entropy=int(seed), spawn_key=_spawn_key(path))


def derive_seed(seed: int, *path: PathPart) -> int:
    """Derive a u64 child seed for the stream named by ``path``."""
    return int(seed_sequence(seed, *path).generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, *path: PathPart) -> np.random.Generator:
    """Generator for the stream named by ``path`` under ``seed``."""
    return np.random.default_rng(seed_sequence(seed, *path))


def complex_normal(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian draws with the given per-entry variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
