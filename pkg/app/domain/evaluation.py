"""Normalized mean squared error and decibel helpers."""

import numpy as np

from app.domain.entities import GroupMap
from app.errors import InvalidArgumentError


def _per_sample_ratio(truth: np.ndarray, estimate: np.ndarray, axes) -> np.ndarray:
    error = np.sum(np.abs(truth - estimate) ** 2, axis=axes)
    power = np.sum(np.abs(truth) ** 2, axis=axes)
    if np.any(power == 0):
        raise InvalidArgumentError(
            "NMSE is undefined for an all-zero truth vector",
            {"zero_rows": np.flatnonzero(np.atleast_1d(power == 0)).tolist()},
        )
    return error / power


def nmse(truth: np.ndarray, estimate: np.ndarray) -> float:
    """Mean over samples of ||h - h_hat||^2 / ||h||^2.

    Accepts one vector or a batch of row vectors.
    """
    truth = np.atleast_2d(np.asarray(truth))
    estimate = np.atleast_2d(np.asarray(estimate))
    if truth.shape != estimate.shape:
        raise InvalidArgumentError(
            "Truth and estimate differ in shape",
            {"truth": truth.shape, "estimate": estimate.shape},
        )
    if truth.shape[-1] == 0:
        raise InvalidArgumentError("NMSE needs non-empty vectors")
    return float(np.mean(_per_sample_ratio(truth, estimate, axes=-1)))


def nmse_per_mode(
    truth_tensors: np.ndarray, estimate_tensors: np.ndarray, group_map: GroupMap
) -> np.ndarray:
    """NMSE of each mode over the columns of antennas for which that mode is extrapolated.

    Tensors are S x N x M x P.
    """
    truth = np.asarray(truth_tensors)
    estimate = np.asarray(estimate_tensors)
    if truth.shape != estimate.shape or truth.ndim != 4 or truth.shape[-1] != group_map.P:
        raise InvalidArgumentError(
            "Tensors must share an S x N x M x P shape matching the group map",
            {"truth": truth.shape, "estimate": estimate.shape},
        )
    if group_map.P < 2:
        raise InvalidArgumentError("Per-mode NMSE needs at least two modes")
    result = np.empty(group_map.P)
    for p in range(group_map.P):
        columns = np.flatnonzero(group_map.assignment != p)
        ratio = _per_sample_ratio(
            truth[:, :, columns, p], estimate[:, :, columns, p], axes=(1, 2)
        )
        result[p] = np.mean(ratio)
    return result


def to_db(value):
    """10 log10 of a power quantity; zero maps to -inf."""
    with np.errstate(divide="ignore"):
        result = 10.0 * np.log10(value)
    return float(result) if np.ndim(result) == 0 else result


def from_db(value_db):
    return 10.0 ** (np.asarray(value_db) / 10.0)
