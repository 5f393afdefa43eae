"""Domain entities - immutable numerical value objects without framework dependencies.

Arrays held by these entities are never mutated after construction; the
``__post_init__`` hooks validate shapes and ranges and mark arrays read-only
so instances can be shared across threads.

Mode indices are 0-based throughout (``p in range(P)``).
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from app.errors import InvalidArgumentError

SPEED_OF_LIGHT = 299_792_458.0


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.asarray(array)
    array.setflags(write=False)
    return array


class EstimatorKind(str, Enum):
    """Channel estimator used to produce a composite estimate."""

    LMMSE = "lmmse"
    LS = "ls"


class ModelKind(str, Enum):
    """Extrapolator families compared by the harness."""

    PRNET = "prnet"
    DNN = "dnn"
    COPY = "copy"


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear arrays at both ends of the link.

    ``chi`` is the phase constant ``2*pi*d*f/c`` of the steering vector.
    """

    M: int
    N: int
    d: float
    f: float
    chi: float = field(init=False)

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise InvalidArgumentError(
                "Antenna counts must be positive", details={"M": self.M, "N": self.N}
            )
        if not (self.d > 0 and self.f > 0) or not (math.isfinite(self.d) and math.isfinite(self.f)):
            raise InvalidArgumentError(
                "Antenna spacing and carrier frequency must be positive and finite",
                details={"d": self.d, "f": self.f},
            )
        object.__setattr__(self, "chi", 2.0 * math.pi * self.d * self.f / SPEED_OF_LIGHT)

    @classmethod
    def half_wavelength(cls, M: int, N: int, f: float) -> "ArrayGeometry":
        """Build a geometry with half-wavelength spacing (chi = pi)."""
        return cls(M=M, N=N, d=SPEED_OF_LIGHT / (2.0 * f), f=f)


@dataclass(frozen=True, eq=False)
class PathSet:
    """Cluster-ray propagation paths shared by every radiation mode."""

    alpha: np.ndarray
    theta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=np.complex128)
        theta = np.asarray(self.theta, dtype=np.float64)
        phi = np.asarray(self.phi, dtype=np.float64)
        if alpha.ndim != 2 or theta.shape != alpha.shape or phi.shape != alpha.shape:
            raise InvalidArgumentError(
                "Path arrays must share one Ncl x Nray shape",
                details={"alpha": alpha.shape, "theta": theta.shape, "phi": phi.shape},
            )
        if np.any(theta < 0) or np.any(theta > 2 * math.pi):
            raise InvalidArgumentError("Azimuth angles must lie in [0, 2*pi]")
        if np.any(phi < 0) or np.any(phi > math.pi):
            raise InvalidArgumentError("Elevation angles must lie in [0, pi]")
        object.__setattr__(self, "alpha", _frozen(alpha))
        object.__setattr__(self, "theta", _frozen(theta))
        object.__setattr__(self, "phi", _frozen(phi))

    @property
    def Ncl(self) -> int:
        return self.alpha.shape[0]

    @property
    def Nray(self) -> int:
        return self.alpha.shape[1]


@dataclass(frozen=True, eq=False)
class PatternGainModel:
    """Per-mode truncated 2-D Fourier series of the radiation-pattern gain.

    ``coeffs[p, u, v]`` multiplies ``exp(j*(u*theta + v*phi))``.
    """

    coeffs: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.ndim != 3 or min(coeffs.shape) < 1:
            raise InvalidArgumentError(
                "Pattern coefficients must have shape P x U_theta x U_phi",
                details={"shape": coeffs.shape},
            )
        object.__setattr__(self, "coeffs", _frozen(coeffs))

    @property
    def P(self) -> int:
        return self.coeffs.shape[0]

    @property
    def U_theta(self) -> int:
        return self.coeffs.shape[1]

    @property
    def U_phi(self) -> int:
        return self.coeffs.shape[2]


@dataclass(frozen=True, eq=False)
class ChannelTensor:
    """True channels of every radiation mode, stacked along the last axis (N x M x P)."""

    H_all: np.ndarray
    geometry: ArrayGeometry
    paths: PathSet

    def __post_init__(self):
        H_all = np.asarray(self.H_all, dtype=np.complex128)
        expected = (self.geometry.N, self.geometry.M)
        if H_all.ndim != 3 or H_all.shape[:2] != expected:
            raise InvalidArgumentError(
                "Channel tensor does not match the geometry",
                details={"shape": H_all.shape, "expected_prefix": expected},
            )
        if not np.all(np.isfinite(H_all)):
            raise InvalidArgumentError("Channel tensor has non-finite entries")
        object.__setattr__(self, "H_all", _frozen(H_all))

    @property
    def P(self) -> int:
        return self.H_all.shape[2]

    def slice(self, p: int) -> np.ndarray:
        """Channel matrix of mode ``p``."""
        return self.H_all[:, :, p]


@dataclass(frozen=True, eq=False)
class GroupMap:
    """Assignment of each transmit antenna to the mode it uses during pilots."""

    M: int
    P: int
    assignment: np.ndarray

    def __post_init__(self):
        assignment = np.asarray(self.assignment, dtype=np.int64)
        if assignment.shape != (self.M,):
            raise InvalidArgumentError(
                "Group assignment must have one entry per antenna",
                details={"M": self.M, "shape": assignment.shape},
            )
        if np.any(assignment < 0) or np.any(assignment >= self.P):
            raise InvalidArgumentError("Group assignment references an unknown mode")
        object.__setattr__(self, "assignment", _frozen(assignment))

    def group_sizes(self) -> List[int]:
        return np.bincount(self.assignment, minlength=self.P).tolist()

    def native_mode(self, m: int) -> int:
        return int(self.assignment[m])

    def non_native_modes(self, m: int) -> Tuple[int, ...]:
        """Modes other than antenna ``m``'s native one, ascending."""
        native = self.native_mode(m)
        return tuple(p for p in range(self.P) if p != native)


@dataclass(frozen=True, eq=False)
class PilotMatrix:
    """M x M pilot block; unitary so that X @ X^H = I."""

    X: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.complex128)
        if X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise InvalidArgumentError("Pilot matrix must be square", details={"shape": X.shape})
        object.__setattr__(self, "X", _frozen(X))

    @property
    def M(self) -> int:
        return self.X.shape[0]


@dataclass(frozen=True, eq=False)
class ChannelCovariance:
    """Transmit-side channel covariance R_H = E[H^H H]."""

    R_H: np.ndarray
    sample_count: int

    def __post_init__(self):
        R_H = np.asarray(self.R_H, dtype=np.complex128)
        if R_H.ndim != 2 or R_H.shape[0] != R_H.shape[1]:
            raise InvalidArgumentError("Covariance must be square", details={"shape": R_H.shape})
        object.__setattr__(self, "R_H", _frozen(R_H))


@dataclass(frozen=True, eq=False)
class CompositeEstimate:
    """Estimated mixed-mode channel together with the grouping that produced it."""

    H_es: np.ndarray
    group_map: GroupMap
    snr_db: float
    estimator: EstimatorKind = EstimatorKind.LMMSE

    def __post_init__(self):
        H_es = np.asarray(self.H_es, dtype=np.complex128)
        if H_es.ndim != 2 or H_es.shape[1] != self.group_map.M:
            raise InvalidArgumentError("Composite estimate does not match the group map")
        if not np.all(np.isfinite(H_es)):
            raise InvalidArgumentError("Composite estimate has non-finite entries")
        object.__setattr__(self, "H_es", _frozen(H_es))


@dataclass(frozen=True, eq=False)
class Sample:
    """One training pair: noisy estimated composite vector and noiseless extrapolation target."""

    h_es: np.ndarray
    h_pre: np.ndarray
    seed: int


@dataclass(frozen=True)
class DatasetHeader:
    """Everything needed to regenerate a dataset from scratch.

    ``format_version`` is the file format the header was read from. Version 1
    stores the generator parameters as a JSON block after the fixed fields.
    """

    M: int
    N: int
    P: int
    sample_count: int
    test_numerator: int
    test_denominator: int
    train_snr_millibels: int
    master_seed: int
    layout_version: int = 1
    generator: Tuple[Tuple[str, object], ...] = ()
    format_version: int = 1

    @property
    def test_fraction(self) -> float:
        return self.test_numerator / self.test_denominator

    @property
    def train_snr_db(self) -> float:
        return self.train_snr_millibels / 100.0

    @property
    def input_length(self) -> int:
        return self.M * self.N

    @property
    def target_length(self) -> int:
        return self.M * self.N * (self.P - 1)

    def generator_params(self) -> dict:
        return dict(self.generator)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Stacked samples with a disjoint, exhaustive train/test split.

    ``inputs`` is S x MN and ``targets`` is S x MN(P-1), both complex64.
    """

    header: DatasetHeader
    inputs: np.ndarray
    targets: np.ndarray
    train_indices: np.ndarray
    test_indices: np.ndarray

    def __post_init__(self):
        S = self.header.sample_count
        if self.inputs.shape != (S, self.header.input_length):
            raise InvalidArgumentError(
                "Dataset inputs do not match the header",
                details={"shape": self.inputs.shape, "expected": (S, self.header.input_length)},
            )
        if self.targets.shape != (S, self.header.target_length):
            raise InvalidArgumentError(
                "Dataset targets do not match the header",
                details={"shape": self.targets.shape, "expected": (S, self.header.target_length)},
            )
        covered = np.sort(np.concatenate([self.train_indices, self.test_indices]))
        if not np.array_equal(covered, np.arange(S)):
            raise InvalidArgumentError("Train/test split must be disjoint and exhaustive")
        for name in ("inputs", "targets", "train_indices", "test_indices"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def sample_count(self) -> int:
        return self.header.sample_count

    def split(self, which: str) -> Tuple[np.ndarray, np.ndarray]:
        """Return (inputs, targets) of the ``"train"`` or ``"test"`` split."""
        if which == "train":
            idx = self.train_indices
        elif which == "test":
            idx = self.test_indices
        else:
            raise InvalidArgumentError(f"Unknown split: {which}")
        return self.inputs[idx], self.targets[idx]


@dataclass
class TrainReport:
    """Per-epoch record of a training run.

    ``train_loss`` and ``epoch_seconds`` hold one entry per epoch.
    ``validation_nmse`` does too when training ran with a validation split and
    stays empty otherwise, so summaries never carry NaN placeholders.
    """

    train_loss: List[float] = field(default_factory=list)
    validation_nmse: List[float] = field(default_factory=list)
    epoch_seconds: List[float] = field(default_factory=list)
    parameter_checksum: str = ""

    @property
    def epochs(self) -> int:
        return len(self.train_loss)
