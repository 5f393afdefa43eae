"""Mini-batch ADAM training loop shared by the complex network and the real baseline."""

import time
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from app.domain.entities import TrainReport
from app.domain.evaluation import nmse
from app.domain.networks import FeedforwardNetwork
from app.domain.optim import AdamState, adam_step
from app.domain.seeding import make_rng
from app.errors import InvalidArgumentError

EpochCallback = Callable[[int, TrainReport], None]


@dataclass(frozen=True)
class TrainingHyperparams:
    lr: float = 1e-3
    batch_size: int = 32
    epochs: int = 500
    shuffle_seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if self.batch_size < 1 or self.epochs < 0 or not self.lr > 0:
            raise InvalidArgumentError(
                "Invalid training hyperparameters",
                {"lr": self.lr, "batch_size": self.batch_size, "epochs": self.epochs},
            )


def train(
    net: FeedforwardNetwork,
    inputs: np.ndarray,
    targets: np.ndarray,
    hyperparams: TrainingHyperparams,
    validation: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    on_epoch: Optional[EpochCallback] = None,
) -> TrainReport:
    """Train ``net`` in place.

    ``inputs``/``targets`` are already in the network's own space (see
    ``FeedforwardNetwork.encode``). Each epoch reshuffles the training rows,
    keeps the final partial batch, and records the sample-weighted mean batch
    loss. Validation NMSE is computed on decoded outputs when given.
    """
    inputs = np.asarray(inputs)
    targets = np.asarray(targets)
    count = inputs.shape[0]
    if count == 0:
        raise InvalidArgumentError("Training set is empty")
    if targets.shape[0] != count:
        raise InvalidArgumentError(
            "Inputs and targets hold different sample counts",
            {"inputs": inputs.shape, "targets": targets.shape},
        )
    if hyperparams.batch_size > count:
        raise InvalidArgumentError(
            "Batch size exceeds the training set",
            {"batch_size": hyperparams.batch_size, "samples": count},
        )

    state = AdamState.for_network(
        net,
        lr=hyperparams.lr,
        beta1=hyperparams.beta1,
        beta2=hyperparams.beta2,
        eps=hyperparams.eps,
    )
    rng = make_rng(hyperparams.shuffle_seed)
    report = TrainReport()

    for epoch in range(hyperparams.epochs):
        started = time.perf_counter()
        order = rng.permutation(count)
        total = 0.0
        for start in range(0, count, hyperparams.batch_size):
            batch = order[start : start + hyperparams.batch_size]
            outputs, cache = net.forward_batch(inputs[batch])
            total += net.loss(outputs, targets[batch]) * len(batch)
            grads = net.backward(cache, targets[batch])
            adam_step(net, grads, state)
        report.train_loss.append(total / count)

        if validation is not None:
            val_inputs, val_targets = validation
            predicted = net.decode(net.forward(val_inputs))
            report.validation_nmse.append(nmse(net.decode(val_targets), predicted))
        report.epoch_seconds.append(time.perf_counter() - started)
        if on_epoch is not None:
            on_epoch(epoch, report)

    report.parameter_checksum = net.checksum()
    return report
