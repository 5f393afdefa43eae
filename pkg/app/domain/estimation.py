"""Grouped-mode pilot transmission and composite channel estimation.

During the pilot phase the transmit antennas are split into P contiguous
groups, group g radiating in mode g, so a single M-symbol pilot block sounds
one column of every mode.
"""

import math
import warnings
from typing import Sequence, Union

import numpy as np
import scipy.linalg
from scipy.linalg import LinAlgError, LinAlgWarning

from app.domain.entities import ChannelCovariance, ChannelTensor, GroupMap, PilotMatrix
from app.domain.seeding import complex_normal, make_rng
from app.errors import InvalidArgumentError, NumericalFailureError

DEFAULT_MAX_CONDITION = 1e12


def partition_antennas(M: int, P: int) -> GroupMap:
    """Split M antennas into P contiguous groups.

    The first P-1 groups hold floor(M/P) antennas each; the last group takes
    the remainder so that the sizes always sum to M.
    """
    if P < 1 or M < 1:
        raise InvalidArgumentError("Antenna and mode counts must be positive", {"M": M, "P": P})
    if M < P:
        raise InvalidArgumentError(
            "Fewer antennas than modes leaves some mode unobserved", {"M": M, "P": P}
        )
    size = M // P
    assignment = np.minimum(np.arange(M) // size, P - 1)
    return GroupMap(M=M, P=P, assignment=assignment)


def composite_channel(tensor: Union[ChannelTensor, np.ndarray], group_map: GroupMap) -> np.ndarray:
    """Mixed-mode channel: column m taken from the slice of antenna m's native mode."""
    H_all = tensor.H_all if isinstance(tensor, ChannelTensor) else np.asarray(tensor)
    if H_all.ndim != 3 or H_all.shape[1] != group_map.M or H_all.shape[2] < group_map.P:
        raise InvalidArgumentError(
            "Channel tensor does not match the group map",
            {"shape": H_all.shape, "M": group_map.M, "P": group_map.P},
        )
    return H_all[:, np.arange(group_map.M), group_map.assignment]


def make_pilots(M: int) -> PilotMatrix:
    """Unitary DFT pilot block (X @ X^H = I_M)."""
    if M < 1:
        raise InvalidArgumentError("Pilot length must be positive", {"M": M})
    return PilotMatrix(X=scipy.linalg.dft(M, scale="sqrtn"))


def noise_variance(snr_db: float) -> float:
    """Per-entry noise variance for unit-power symbols: SNR = 10 log10(1 / sigma^2)."""
    if math.isnan(snr_db) or snr_db == -math.inf:
        raise InvalidArgumentError("SNR must be a number above -inf", {"snr_db": snr_db})
    if snr_db == math.inf:
        return 0.0
    return 10.0 ** (-snr_db / 10.0)


def transmit(H_true: np.ndarray, pilots: PilotMatrix, snr_db: float, seed: int) -> np.ndarray:
    """Received pilot block Y = H X + W with i.i.d. CN(0, sigma^2) noise."""
    H_true = np.asarray(H_true)
    if H_true.ndim != 2 or H_true.shape[1] != pilots.M:
        raise InvalidArgumentError(
            "Channel and pilot dimensions disagree", {"H": H_true.shape, "M": pilots.M}
        )
    Y = H_true @ pilots.X
    sigma2 = noise_variance(snr_db)
    if sigma2 > 0:
        Y = Y + complex_normal(make_rng(seed), Y.shape, sigma2)
    return Y


def estimate_covariance(samples: Union[Sequence[np.ndarray], np.ndarray]) -> ChannelCovariance:
    """Sample covariance R_H = 1/S sum_s H_s^H H_s, Hermitian-symmetrized."""
    stack = np.asarray(samples, dtype=np.complex128)
    if stack.size == 0 or stack.ndim != 3:
        raise InvalidArgumentError("Covariance estimation needs at least one N x M sample")
    S, _, M = stack.shape
    products = np.conj(np.swapaxes(stack, 1, 2)) @ stack  # S x M x M
    # Summing along a contiguous axis lets numpy use pairwise summation.
    total = np.ascontiguousarray(products.reshape(S, M * M).T).sum(axis=1)
    R_H = total.reshape(M, M) / S
    R_H = 0.5 * (R_H + R_H.conj().T)
    return ChannelCovariance(R_H=R_H, sample_count=S)


def _solve(A: np.ndarray, B: np.ndarray, assume_a: str, max_condition: float) -> np.ndarray:
    condition = float(np.linalg.cond(A))
    if not math.isfinite(condition) or condition > max_condition:
        raise NumericalFailureError(
            "Linear system is singular beyond tolerance",
            {"condition": condition, "max_condition": max_condition},
        )
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", LinAlgWarning)
            return scipy.linalg.solve(A, B, assume_a=assume_a)
    except (LinAlgError, LinAlgWarning) as exc:
        raise NumericalFailureError(
            "Linear solve failed", {"condition": condition, "reason": str(exc)}
        ) from exc


def lmmse_filter(
    pilots: PilotMatrix,
    covariance: ChannelCovariance,
    sigma2: float,
    N: int,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> np.ndarray:
    """M x M matrix G with H_es = Y G, G = (X^H R X + sigma^2 N I)^{-1} X^H R."""
    if sigma2 < 0:
        raise InvalidArgumentError("Noise variance must be non-negative", {"sigma2": sigma2})
    X = pilots.X
    R = covariance.R_H
    if R.shape != X.shape:
        raise InvalidArgumentError(
            "Covariance and pilot dimensions disagree", {"R_H": R.shape, "X": X.shape}
        )
    XhR = X.conj().T @ R
    A = XhR @ X + sigma2 * N * np.eye(X.shape[0])
    A = 0.5 * (A + A.conj().T)
    return _solve(A, XhR, assume_a="her", max_condition=max_condition)


def lmmse_estimate(
    Y: np.ndarray,
    pilots: PilotMatrix,
    covariance: ChannelCovariance,
    sigma2: float,
    N: int,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> np.ndarray:
    """LMMSE estimate H_es = Y (X^H R_H X + sigma^2 N I)^{-1} X^H R_H."""
    Y = np.asarray(Y)
    if Y.ndim != 2 or Y.shape[1] != pilots.M:
        raise InvalidArgumentError("Received block does not match the pilots", {"Y": Y.shape})
    return Y @ lmmse_filter(pilots, covariance, sigma2, N, max_condition)


def ls_estimate(
    Y: np.ndarray, pilots: PilotMatrix, max_condition: float = DEFAULT_MAX_CONDITION
) -> np.ndarray:
    """Least-squares estimate H_ls = Y X^{-1}."""
    Y = np.asarray(Y)
    if Y.ndim != 2 or Y.shape[1] != pilots.M:
        raise InvalidArgumentError("Received block does not match the pilots", {"Y": Y.shape})
    # Y X^{-1} = (X^T \ Y^T)^T
    return _solve(pilots.X.T, Y.T, assume_a="gen", max_condition=max_condition).T
