"""Vectorization of estimated and extrapolated channels.

h_es[m*N + n]              = H_es[n, m]                      (column-major vec)
h_pre[(k*M + m)*N + n]     = H_all[n, m, k-th non-native mode of antenna m]

Non-native modes of an antenna are enumerated in ascending mode order. All
vectorize functions accept either one tensor or a leading batch axis.
"""

from dataclasses import dataclass, field

import numpy as np

from app.domain.entities import GroupMap
from app.errors import InvalidArgumentError

LAYOUT_VERSION = 1


@dataclass(frozen=True, eq=False)
class VectorLayout:
    """Index bookkeeping between N x M x P tensors and (h_es, h_pre) vectors."""

    N: int
    M: int
    P: int
    group_map: GroupMap
    version: int = LAYOUT_VERSION
    _mode_index: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.group_map.M != self.M or self.group_map.P != self.P:
            raise InvalidArgumentError(
                "Group map does not match the layout dimensions",
                {"M": self.M, "P": self.P, "map_M": self.group_map.M, "map_P": self.group_map.P},
            )
        k = np.arange(self.P - 1)[:, None]
        native = self.group_map.assignment[None, :]
        # k-th non-native mode skips over the native one
        mode_index = k + (k >= native)
        mode_index.setflags(write=False)
        object.__setattr__(self, "_mode_index", mode_index)

    @classmethod
    def for_group_map(cls, N: int, group_map: GroupMap) -> "VectorLayout":
        return cls(N=N, M=group_map.M, P=group_map.P, group_map=group_map)

    @property
    def input_length(self) -> int:
        return self.M * self.N

    @property
    def target_length(self) -> int:
        return self.M * self.N * (self.P - 1)

    def _target_index(self):
        k_m = self._mode_index[:, :, None]  # (P-1) x M x 1
        m = np.arange(self.M)[None, :, None]
        n = np.arange(self.N)[None, None, :]
        return n, m, k_m

    def vectorize_estimate(self, H_es: np.ndarray) -> np.ndarray:
        """vec(H_es): receiver index fastest."""
        H_es = np.asarray(H_es)
        if H_es.shape[-2:] != (self.N, self.M):
            raise InvalidArgumentError(
                "Estimate shape does not match the layout", {"shape": H_es.shape}
            )
        batch = H_es.shape[:-2]
        return np.swapaxes(H_es, -1, -2).reshape(*batch, self.input_length)

    def vectorize_targets(self, H_all: np.ndarray) -> np.ndarray:
        """Entries of every non-native mode, ordered per the module layout."""
        H_all = np.asarray(H_all)
        if H_all.shape[-3:] != (self.N, self.M, self.P):
            raise InvalidArgumentError(
                "Channel tensor shape does not match the layout", {"shape": H_all.shape}
            )
        n, m, k_m = self._target_index()
        batch = H_all.shape[:-3]
        return H_all[..., n, m, k_m].reshape(*batch, self.target_length)

    def unvectorize_estimate(self, h_es: np.ndarray) -> np.ndarray:
        h_es = np.asarray(h_es)
        if h_es.shape[-1] != self.input_length:
            raise InvalidArgumentError(
                "Estimate vector length does not match the layout",
                {"length": h_es.shape[-1], "expected": self.input_length},
            )
        batch = h_es.shape[:-1]
        return np.swapaxes(h_es.reshape(*batch, self.M, self.N), -1, -2)

    def assemble_full_csi(self, h_es: np.ndarray, h_pre: np.ndarray) -> np.ndarray:
        """Rebuild the N x M x P tensor from estimated and extrapolated vectors."""
        h_es = np.asarray(h_es)
        h_pre = np.asarray(h_pre)
        if h_pre.shape[-1] != self.target_length or h_pre.shape[:-1] != h_es.shape[:-1]:
            raise InvalidArgumentError(
                "Extrapolated vector length does not match the layout",
                {"length": h_pre.shape[-1], "expected": self.target_length},
            )
        H_es = self.unvectorize_estimate(h_es)
        batch = h_es.shape[:-1]
        dtype = np.result_type(h_es.dtype, h_pre.dtype, np.complex64)
        H_all = np.empty((*batch, self.N, self.M, self.P), dtype=dtype)
        H_all[..., np.arange(self.M), self.group_map.assignment] = H_es
        n, m, k_m = self._target_index()
        H_all[..., n, m, k_m] = h_pre.reshape(*batch, self.P - 1, self.M, self.N)
        return H_all
