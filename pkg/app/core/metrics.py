"""
Prometheus metrics for experiment runs.

Each run gets its own registry so sweeps in one process do not share
counters; the registry is dumped in text exposition format into the run
directory at the end.
"""

from pathlib import Path
from typing import Union

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

EPOCH_BUCKETS = (0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0, 30.0, 60.0, 300.0)


class RunMetrics:
    """Counters, histograms and gauges of one run."""

    def __init__(self):
        self.registry = CollectorRegistry()
        self.samples_generated = Counter(
            "prnet_samples_generated",
            "Channel samples generated",
            registry=self.registry,
        )
        self.epoch_duration = Histogram(
            "prnet_epoch_duration_seconds",
            "Wall-clock duration of one training epoch",
            ["model"],
            buckets=EPOCH_BUCKETS,
            registry=self.registry,
        )
        self.train_loss = Gauge(
            "prnet_train_loss",
            "Training loss of the latest epoch",
            ["model"],
            registry=self.registry,
        )
        self.eval_nmse_db = Gauge(
            "prnet_eval_nmse_db",
            "Test-set NMSE in dB",
            ["model", "axis", "value"],
            registry=self.registry,
        )

    def record_epoch(self, model: str, seconds: float, loss: float) -> None:
        self.epoch_duration.labels(model=model).observe(seconds)
        self.train_loss.labels(model=model).set(loss)

    def record_nmse(self, model: str, axis: str, value: float, nmse_db: float) -> None:
        self.eval_nmse_db.labels(model=model, axis=axis, value=f"{value:g}").set(nmse_db)

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_to_textfile(str(path), self.registry)
        return path
