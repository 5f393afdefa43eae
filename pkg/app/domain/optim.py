"""ADAM optimizer over real scalars.

Complex parameters are updated through their float64 views, so the real and
imaginary parts each get their own first and second moments and ``v`` stays
real and non-negative.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from app.domain.networks import FeedforwardNetwork, LayerGradients
from app.errors import InvalidArgumentError


def _real_view(array: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(array):
        return array.view(np.float64)
    return array


@dataclass
class AdamState:
    """Moment accumulators for every real scalar of a network."""

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: List[np.ndarray] = field(default_factory=list)
    v: List[np.ndarray] = field(default_factory=list)

    @classmethod
    def for_network(cls, net: FeedforwardNetwork, **hyperparams) -> "AdamState":
        shapes = [_real_view(p).shape for p in net.parameters()]
        return cls(
            m=[np.zeros(s) for s in shapes],
            v=[np.zeros(s) for s in shapes],
            **hyperparams,
        )


def adam_step(
    net: FeedforwardNetwork, grads: List[LayerGradients], state: AdamState
) -> Tuple[FeedforwardNetwork, AdamState]:
    """Apply one bias-corrected ADAM update in place and return (net, state)."""
    params = net.parameters()
    flat_grads = []
    for g in grads:
        flat_grads.extend([g.W, g.b])
    if len(flat_grads) != len(params) or len(state.m) != len(params):
        raise InvalidArgumentError(
            "Gradient list does not match the network",
            {"params": len(params), "grads": len(flat_grads), "state": len(state.m)},
        )
    for param, grad in zip(params, flat_grads):
        if param.shape != grad.shape:
            raise InvalidArgumentError(
                "Gradient shape does not match its parameter",
                {"param": param.shape, "grad": grad.shape},
            )

    state.t += 1
    correction1 = 1.0 - state.beta1**state.t
    correction2 = 1.0 - state.beta2**state.t
    for i, (param, grad) in enumerate(zip(params, flat_grads)):
        p = _real_view(param)
        g = _real_view(np.ascontiguousarray(grad, dtype=param.dtype))
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g
        m_hat = state.m[i] / correction1
        v_hat = state.v[i] / correction2
        p -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    net.mark_updated()
    return net, state
