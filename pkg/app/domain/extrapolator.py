"""Trained and reference channel extrapolators (the on-line stage).

An extrapolator maps a batch of estimated composite vectors h_es to the
extrapolated vectors h_pre of every non-native mode.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from app.domain.entities import ModelKind
from app.domain.layout import VectorLayout
from app.domain.networks import ComplexNetwork, FeedforwardNetwork
from app.errors import InvalidArgumentError


class Extrapolator(ABC):
    """Maps estimated composite channel vectors to extrapolated ones."""

    kind: ModelKind

    @abstractmethod
    def predict(self, h_es: np.ndarray) -> np.ndarray:
        """Extrapolate a single vector or a batch of row vectors."""

    @abstractmethod
    def parameter_count(self) -> int:
        """Real trainable parameters."""


def normalization_scale(inputs: np.ndarray, targets: np.ndarray) -> float:
    """Scalar s such that s*inputs and s*targets have unit average per-entry power together."""
    inputs = np.asarray(inputs)
    targets = np.asarray(targets)
    energy = np.sum(np.abs(inputs) ** 2) + np.sum(np.abs(targets) ** 2)
    entries = inputs.size + targets.size
    if entries == 0 or energy == 0:
        raise InvalidArgumentError("Cannot normalize an all-zero training set")
    return float(1.0 / np.sqrt(energy / entries))


@dataclass
class NetworkExtrapolator(Extrapolator):
    """A trained network plus the global normalization scalar it was trained with."""

    network: FeedforwardNetwork
    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise InvalidArgumentError(
                "Normalization scale must be positive", {"scale": self.scale}
            )

    @property
    def kind(self) -> ModelKind:
        return ModelKind.PRNET if isinstance(self.network, ComplexNetwork) else ModelKind.DNN

    def encode_inputs(self, h_es: np.ndarray) -> np.ndarray:
        return self.network.encode(np.asarray(h_es) * self.scale)

    def encode_targets(self, h_pre: np.ndarray) -> np.ndarray:
        return self.network.encode(np.asarray(h_pre) * self.scale)

    def predict(self, h_es: np.ndarray) -> np.ndarray:
        output = self.network.forward(self.encode_inputs(h_es))
        return self.network.decode(output) / self.scale

    def parameter_count(self) -> int:
        return self.network.parameter_count()


@dataclass
class NativeCopyExtrapolator(Extrapolator):
    """Predicts every non-native mode of an antenna as its estimated native-mode channel."""

    layout: VectorLayout
    kind = ModelKind.COPY

    def predict(self, h_es: np.ndarray) -> np.ndarray:
        h_es = np.asarray(h_es)
        if h_es.shape[-1] != self.layout.input_length:
            raise InvalidArgumentError(
                "Estimate vector length does not match the layout",
                {"length": h_es.shape[-1], "expected": self.layout.input_length},
            )
        batch = h_es.shape[:-1]
        per_antenna = h_es.reshape(*batch, 1, self.layout.M, self.layout.N)
        repeated = np.broadcast_to(
            per_antenna, (*batch, self.layout.P - 1, self.layout.M, self.layout.N)
        )
        return repeated.reshape(*batch, self.layout.target_length)

    def parameter_count(self) -> int:
        return 0


def extrapolate(model: Extrapolator, H_es: np.ndarray, layout: VectorLayout) -> np.ndarray:
    """Full N x M x P channel from one estimated composite channel (or a batch of them)."""
    h_es = layout.vectorize_estimate(H_es)
    return layout.assemble_full_csi(h_es, model.predict(h_es))
