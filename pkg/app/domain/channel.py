"""Clustered multipath channel model with per-mode radiation-pattern gains.

H^p = 1/sqrt(MN) * sum_ij alpha_ij * b_p(theta_ij, phi_ij) * a_r(theta_ij) a_t(theta_ij)^H

The steering vectors depend on azimuth only; elevation reaches the channel
solely through the pattern gain b_p.
"""

import math
from typing import Union

import numpy as np

from app.domain.entities import ArrayGeometry, ChannelTensor, PathSet, PatternGainModel
from app.domain.seeding import complex_normal, make_rng
from app.errors import InvalidArgumentError

DEFAULT_RAY_SPREAD = math.radians(7.5)
DEFAULT_FOURIER_ORDER = 4
NORMALIZATION_GRID = 64

ArrayLike = Union[float, np.ndarray]


def _steering(chi: float, theta: np.ndarray, length: int) -> np.ndarray:
    """length x R matrix whose columns are steering vectors for each angle."""
    k = np.arange(length, dtype=np.float64)[:, None]
    return np.exp(-1j * chi * k * np.sin(theta)[None, :])


def steering_vector(geometry: ArrayGeometry, theta: float, length: int) -> np.ndarray:
    """Array response ``[1, e^{-j chi sin(theta)}, ..., e^{-j chi (length-1) sin(theta)}]``."""
    if length < 1:
        raise InvalidArgumentError("Steering vector length must be at least 1")
    if not math.isfinite(theta):
        raise InvalidArgumentError("Steering angle must be finite", details={"theta": theta})
    return _steering(geometry.chi, np.array([theta], dtype=np.float64), length)[:, 0]


def sample_paths(
    seed: int, Ncl: int, Nray: int, spread: float = DEFAULT_RAY_SPREAD
) -> PathSet:
    """Draw a cluster-ray path set.

    Cluster centres are uniform over the full angular range; rays scatter
    uniformly within +/- ``spread`` of their centre. Azimuths wrap into
    [0, 2*pi), elevations are clamped into [0, pi]. Gains are unit-variance
    circularly-symmetric complex Gaussian.
    """
    if Ncl < 1 or Nray < 1:
        raise InvalidArgumentError(
            "Cluster and ray counts must be positive", details={"Ncl": Ncl, "Nray": Nray}
        )
    if not spread >= 0:
        raise InvalidArgumentError("Ray spread must be non-negative", details={"spread": spread})

    rng = make_rng(seed)
    theta_centre = rng.uniform(0.0, 2 * math.pi, size=(Ncl, 1))
    phi_centre = rng.uniform(0.0, math.pi, size=(Ncl, 1))
    theta_offset = rng.uniform(-spread, spread, size=(Ncl, Nray))
    phi_offset = rng.uniform(-spread, spread, size=(Ncl, Nray))
    alpha = complex_normal(rng, (Ncl, Nray))

    theta = np.mod(theta_centre + theta_offset, 2 * math.pi)
    phi = np.clip(phi_centre + phi_offset, 0.0, math.pi)
    return PathSet(alpha=alpha, theta=theta, phi=phi)


def _fourier_terms(coeffs: np.ndarray, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Evaluate sum_uv coeffs[..., u, v] e^{j(u theta + v phi)} for flat angle arrays.

    ``coeffs`` is (P, U, V); the result is (P, R).
    """
    u = np.arange(coeffs.shape[-2])
    v = np.arange(coeffs.shape[-1])
    e_theta = np.exp(1j * np.multiply.outer(theta, u))  # R x U
    e_phi = np.exp(1j * np.multiply.outer(phi, v))  # R x V
    return np.einsum("puv,ru,rv->pr", coeffs, e_theta, e_phi)


def _normalization_grid():
    theta = np.linspace(0.0, 2 * math.pi, NORMALIZATION_GRID, endpoint=False)
    phi = np.linspace(0.0, math.pi, NORMALIZATION_GRID, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    return tt.ravel(), pp.ravel()


def mean_pattern_power(model: PatternGainModel) -> np.ndarray:
    """Average |b_p|^2 of every mode over the 64 x 64 normalization grid."""
    theta, phi = _normalization_grid()
    gains = _fourier_terms(model.coeffs, theta, phi)
    return np.mean(np.abs(gains) ** 2, axis=1)


def build_pattern_gain_model(
    seed: int,
    P: int,
    U_theta: int = DEFAULT_FOURIER_ORDER,
    U_phi: int = DEFAULT_FOURIER_ORDER,
) -> PatternGainModel:
    """Draw seeded Fourier coefficients for ``P`` modes, normalized to unit average power."""
    if P < 1 or U_theta < 1 or U_phi < 1:
        raise InvalidArgumentError(
            "Mode count and Fourier orders must be positive",
            details={"P": P, "U_theta": U_theta, "U_phi": U_phi},
        )
    coeffs = complex_normal(make_rng(seed), (P, U_theta, U_phi))
    power = mean_pattern_power(PatternGainModel(coeffs=coeffs))
    coeffs = coeffs / np.sqrt(power)[:, None, None]
    return PatternGainModel(coeffs=coeffs, seed=seed)


def _check_mode(model: PatternGainModel, p: int) -> None:
    if not 0 <= p < model.P:
        raise InvalidArgumentError(
            "Mode index out of range", details={"p": p, "P": model.P}
        )


def pattern_gain(model: PatternGainModel, p: int, theta: ArrayLike, phi: ArrayLike):
    """Radiation-pattern gain b_p(theta, phi) of mode ``p``.

    Scalars in give a complex scalar out; arrays broadcast elementwise.
    """
    _check_mode(model, p)
    theta_arr, phi_arr = np.broadcast_arrays(
        np.asarray(theta, dtype=np.float64), np.asarray(phi, dtype=np.float64)
    )
    values = _fourier_terms(model.coeffs[p : p + 1], theta_arr.ravel(), phi_arr.ravel())[0]
    if theta_arr.ndim == 0:
        return complex(values[0])
    return values.reshape(theta_arr.shape)


def _check_dimensions(geometry: ArrayGeometry, paths: PathSet, gains: PatternGainModel) -> None:
    if not isinstance(paths, PathSet) or not isinstance(gains, PatternGainModel):
        raise InvalidArgumentError("Channel generation needs a PathSet and a PatternGainModel")
    if geometry.M < 1 or geometry.N < 1:
        raise InvalidArgumentError("Geometry has no antennas")


def generate_channel(
    geometry: ArrayGeometry, paths: PathSet, gains: PatternGainModel, p: int
) -> np.ndarray:
    """N x M channel of radiation mode ``p``."""
    _check_dimensions(geometry, paths, gains)
    _check_mode(gains, p)
    theta = paths.theta.ravel()
    weights = paths.alpha.ravel() * pattern_gain(gains, p, theta, paths.phi.ravel())
    a_r = _steering(geometry.chi, theta, geometry.N)
    a_t = _steering(geometry.chi, theta, geometry.M)
    return (a_r * weights[None, :]) @ a_t.conj().T / math.sqrt(geometry.M * geometry.N)


def generate_all_modes(
    geometry: ArrayGeometry, paths: PathSet, gains: PatternGainModel
) -> ChannelTensor:
    """Channels of every mode over one shared path set (N x M x P)."""
    _check_dimensions(geometry, paths, gains)
    H_all = np.stack(
        [generate_channel(geometry, paths, gains, p) for p in range(gains.P)], axis=-1
    )
    return ChannelTensor(H_all=H_all, geometry=geometry, paths=paths)
