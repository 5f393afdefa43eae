"""Fully-connected feedforward networks with hand-written backpropagation.

Both the complex-valued extrapolation network and the real-valued baseline
share one implementation. Batches are row-major: ``X`` is R x n_in and each
layer computes ``Z = X W^T + b``.

Gradients of the real loss with respect to a complex parameter are packaged
as ``dL/dRe + j dL/dIm``. With that convention the chain rule through an
affine layer reads ``G_W = Delta^T conj(X)`` and ``Delta_in = Delta conj(W)``,
which reduces to ordinary real backprop when every array is real.
"""

import hashlib
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from app.domain.seeding import complex_normal, make_rng
from app.errors import InvalidArgumentError, InvalidStateError

MIN_DEPTH = 3


def crelu(z: np.ndarray) -> np.ndarray:
    """Split activation max(Re z, 0) + j max(Im z, 0)."""
    z = np.asarray(z)
    return np.maximum(z.real, 0.0) + 1j * np.maximum(z.imag, 0.0)


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(np.asarray(z), 0.0)


def embed_complex(x: np.ndarray) -> np.ndarray:
    """Stack real parts then imaginary parts along the last axis."""
    x = np.asarray(x)
    return np.concatenate([x.real, x.imag], axis=-1)


def unembed_real(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`embed_complex`."""
    v = np.asarray(v)
    if v.shape[-1] % 2:
        raise InvalidArgumentError("Stacked vector must have even length", {"length": v.shape[-1]})
    half = v.shape[-1] // 2
    return v[..., :half] + 1j * v[..., half:]


def _as_batch(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    return a[None, :] if a.ndim == 1 else a


def _squared_error(outputs: np.ndarray, targets: np.ndarray) -> np.ndarray:
    outputs = _as_batch(outputs)
    targets = _as_batch(targets)
    if outputs.shape != targets.shape:
        raise InvalidArgumentError(
            "Outputs and targets differ in shape",
            {"outputs": outputs.shape, "targets": targets.shape},
        )
    if outputs.shape[0] < 1 or outputs.shape[1] < 1:
        raise InvalidArgumentError("Loss needs at least one sample of non-zero length")
    e = outputs - targets
    return e.real**2 + e.imag**2


def loss(batch_outputs: np.ndarray, batch_targets: np.ndarray) -> float:
    """Mean squared complex error 1/(R L_h) sum_r ||h_hat - h||^2."""
    return float(np.mean(_squared_error(batch_outputs, batch_targets)))


@dataclass
class LayerParams:
    """Affine layer ``W x + b`` with an optional activation."""

    W: np.ndarray
    b: np.ndarray
    has_activation: bool

    def __post_init__(self):
        self.W = np.ascontiguousarray(self.W)
        self.b = np.ascontiguousarray(self.b)
        if self.W.ndim != 2 or self.b.shape != (self.W.shape[0],):
            raise InvalidArgumentError(
                "Layer weight and bias shapes disagree", {"W": self.W.shape, "b": self.b.shape}
            )
        if not (np.all(np.isfinite(self.W)) and np.all(np.isfinite(self.b))):
            raise InvalidArgumentError("Layer parameters must be finite")

    @property
    def n_in(self) -> int:
        return self.W.shape[1]

    @property
    def n_out(self) -> int:
        return self.W.shape[0]


@dataclass
class LayerGradients:
    W: np.ndarray
    b: np.ndarray


@dataclass
class ForwardCache:
    """Per-layer inputs and pre-activations of one forward pass."""

    inputs: List[np.ndarray]
    pre_activations: List[np.ndarray]
    output: np.ndarray
    version: int


def _validate_dims(dims: Sequence[int]) -> List[int]:
    dims = [int(d) for d in dims]
    if len(dims) < MIN_DEPTH:
        raise InvalidArgumentError(
            "Networks need an input, at least one hidden layer and an output",
            {"dims": dims},
        )
    if any(d < 1 for d in dims):
        raise InvalidArgumentError("Layer widths must be positive", {"dims": dims})
    return dims


class FeedforwardNetwork(ABC):
    """Stack of affine layers; all but the last apply the activation."""

    dtype: np.dtype
    magic: bytes

    def __init__(self, layers: List[LayerParams]):
        if not layers:
            raise InvalidArgumentError("A network needs at least one layer")
        for prev, nxt in zip(layers, layers[1:]):
            if prev.n_out != nxt.n_in:
                raise InvalidArgumentError(
                    "Consecutive layer widths disagree", {"n_out": prev.n_out, "n_in": nxt.n_in}
                )
        if layers[-1].has_activation or not all(layer.has_activation for layer in layers[:-1]):
            raise InvalidArgumentError("Only the output layer may omit the activation")
        self.layers = [
            LayerParams(
                W=np.asarray(layer.W, dtype=self.dtype),
                b=np.asarray(layer.b, dtype=self.dtype),
                has_activation=layer.has_activation,
            )
            for layer in layers
        ]
        self._version = 0

    @property
    def dims(self) -> List[int]:
        return [self.layers[0].n_in] + [layer.n_out for layer in self.layers]

    @property
    def version(self) -> int:
        """Bumped on every parameter update; forward caches from older versions are stale."""
        return self._version

    def mark_updated(self) -> None:
        self._version += 1

    def parameters(self) -> List[np.ndarray]:
        params = []
        for layer in self.layers:
            params.extend([layer.W, layer.b])
        return params

    def parameter_count(self) -> int:
        """Number of real scalars in the parameters."""
        count = sum(p.size for p in self.parameters())
        return 2 * count if np.iscomplexobj(self.layers[0].W) else count

    def checksum(self) -> str:
        digest = hashlib.blake2b(digest_size=16)
        for param in self.parameters():
            little_endian = np.ascontiguousarray(param).astype(param.dtype.newbyteorder("<"))
            digest.update(little_endian.tobytes())
        return digest.hexdigest()

    @abstractmethod
    def activate(self, z: np.ndarray) -> np.ndarray:
        """Elementwise activation."""

    @abstractmethod
    def activation_backward(self, delta: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Pull a gradient back through the activation evaluated at ``z``."""

    @abstractmethod
    def encode(self, x: np.ndarray) -> np.ndarray:
        """Map complex channel vectors into the network's input/output space."""

    @abstractmethod
    def decode(self, y: np.ndarray) -> np.ndarray:
        """Map network outputs back to complex channel vectors."""

    @abstractmethod
    def loss_length(self, width: int) -> int:
        """L_h of the loss normalization for an output of ``width`` scalars."""

    def forward_batch(self, X: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
        X = _as_batch(np.asarray(X, dtype=self.dtype))
        if X.shape[1] != self.layers[0].n_in:
            raise InvalidArgumentError(
                "Input length does not match the network",
                {"length": X.shape[1], "expected": self.layers[0].n_in},
            )
        inputs, pre_activations = [], []
        a = X
        for layer in self.layers:
            inputs.append(a)
            z = a @ layer.W.T + layer.b
            pre_activations.append(z)
            a = self.activate(z) if layer.has_activation else z
        return a, ForwardCache(inputs, pre_activations, a, self._version)

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Network output for a single vector or a batch of row vectors."""
        out, _ = self.forward_batch(x)
        return out[0] if np.ndim(x) == 1 else out

    def loss(self, outputs: np.ndarray, targets: np.ndarray) -> float:
        err = _squared_error(outputs, targets)
        return float(err.sum() / (err.shape[0] * self.loss_length(err.shape[1])))

    def backward(self, cache: ForwardCache, batch_targets: np.ndarray) -> List[LayerGradients]:
        """Gradients of :meth:`loss` for the batch recorded in ``cache``."""
        if cache.version != self._version:
            raise InvalidStateError(
                "Forward cache is stale; parameters changed since the forward pass",
                {"cache_version": cache.version, "network_version": self._version},
            )
        targets = _as_batch(np.asarray(batch_targets))
        out = cache.output
        if targets.shape != out.shape:
            raise InvalidArgumentError(
                "Targets do not match the cached outputs",
                {"targets": targets.shape, "outputs": out.shape},
            )
        R, width = out.shape
        delta = 2.0 * (out - targets) / (R * self.loss_length(width))

        grads: List[LayerGradients] = []
        for index in reversed(range(len(self.layers))):
            layer = self.layers[index]
            if layer.has_activation:
                delta = self.activation_backward(delta, cache.pre_activations[index])
            a_in = cache.inputs[index]
            grads.append(
                LayerGradients(
                    W=np.ascontiguousarray(delta.T @ np.conj(a_in)),
                    b=np.ascontiguousarray(delta.sum(axis=0)),
                )
            )
            if index > 0:
                delta = delta @ np.conj(layer.W)
        grads.reverse()
        return grads


class ComplexNetwork(FeedforwardNetwork):
    """Complex-valued network with the split (CReLU) activation."""

    dtype = np.dtype(np.complex128)
    magic = b"PRNW"

    def activate(self, z: np.ndarray) -> np.ndarray:
        return crelu(z)

    def activation_backward(self, delta: np.ndarray, z: np.ndarray) -> np.ndarray:
        # subgradient of max(., 0) at 0 is 0 on each part
        return delta.real * (z.real > 0) + 1j * (delta.imag * (z.imag > 0))

    def encode(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=self.dtype)

    def decode(self, y: np.ndarray) -> np.ndarray:
        return np.asarray(y)

    def loss_length(self, width: int) -> int:
        return width


class RealNetwork(FeedforwardNetwork):
    """Real-valued ReLU network on re/im-stacked channel vectors."""

    dtype = np.dtype(np.float64)
    magic = b"PRNR"

    def activate(self, z: np.ndarray) -> np.ndarray:
        return relu(z)

    def activation_backward(self, delta: np.ndarray, z: np.ndarray) -> np.ndarray:
        return delta * (z > 0)

    def encode(self, x: np.ndarray) -> np.ndarray:
        return embed_complex(x)

    def decode(self, y: np.ndarray) -> np.ndarray:
        return unembed_real(y)

    def loss_length(self, width: int) -> int:
        # matches the complex loss: L_h counts complex entries
        return width // 2


def init_network(dims: Sequence[int], seed: int) -> ComplexNetwork:
    """Complex network with CN(0, 1/n_in) weights and zero biases."""
    dims = _validate_dims(dims)
    rng = make_rng(seed)
    layers = []
    for k, (n_in, n_out) in enumerate(zip(dims, dims[1:])):
        layers.append(
            LayerParams(
                W=complex_normal(rng, (n_out, n_in), variance=1.0 / n_in),
                b=np.zeros(n_out, dtype=np.complex128),
                has_activation=k < len(dims) - 2,
            )
        )
    return ComplexNetwork(layers)


def init_real_network(dims: Sequence[int], seed: int) -> RealNetwork:
    """Real network with N(0, 1/n_in) weights and zero biases."""
    dims = _validate_dims(dims)
    rng = make_rng(seed)
    layers = []
    for k, (n_in, n_out) in enumerate(zip(dims, dims[1:])):
        layers.append(
            LayerParams(
                W=rng.standard_normal((n_out, n_in)) / math.sqrt(n_in),
                b=np.zeros(n_out),
                has_activation=k < len(dims) - 2,
            )
        )
    return RealNetwork(layers)


def complex_parameter_count(dims: Sequence[int]) -> int:
    return sum(2 * (n_in * n_out + n_out) for n_in, n_out in zip(dims, dims[1:]))


def real_parameter_count(dims: Sequence[int]) -> int:
    return sum(n_in * n_out + n_out for n_in, n_out in zip(dims, dims[1:]))


def real_baseline_dims(complex_dims: Sequence[int], hidden: Sequence[int]) -> List[int]:
    """Dims of the real baseline operating on stacked vectors of the complex network's I/O."""
    return [2 * complex_dims[0], *[int(h) for h in hidden], 2 * complex_dims[-1]]


def parity_hidden_width(complex_dims: Sequence[int]) -> int:
    """Uniform real hidden width whose parameter count matches the complex network.

    With L hidden layers of width h the real count is
    (L-1) h^2 + (2 n_in + 2 n_out + L) h + 2 n_out; solve for the positive root.
    """
    dims = _validate_dims(complex_dims)
    target = complex_parameter_count(dims)
    n_in, n_out, hidden = dims[0], dims[-1], len(dims) - 2
    a = hidden - 1
    b = 2 * n_in + 2 * n_out + hidden
    c = 2 * n_out - target
    if a == 0:
        width = -c / b
    else:
        width = (-b + math.sqrt(b * b - 4 * a * c)) / (2 * a)
    return max(1, int(round(width)))


def parameter_ratio(complex_dims: Sequence[int], real_dims: Sequence[int]) -> float:
    """Real baseline parameter count over the complex network's real parameter count."""
    return real_parameter_count(real_dims) / complex_parameter_count(complex_dims)
