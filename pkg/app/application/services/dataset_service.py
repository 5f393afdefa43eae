"""Dataset pipeline application service.

Builds the off-line training data: a scenario (geometry, pattern gains,
antenna grouping, pilots and a calibrated covariance) is fixed per config;
every sample then draws its own propagation paths, estimates the composite
channel at the training SNR and records the noiseless extrapolation targets.
"""

import logging
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from app.application.services.training_service import MODEL_STREAMS
from app.core.config import settings
from app.core.metrics import RunMetrics
from app.domain.channel import build_pattern_gain_model, generate_all_modes, sample_paths
from app.domain.dataset import assemble_dataset
from app.domain.entities import (
    ArrayGeometry,
    ChannelCovariance,
    ChannelTensor,
    CompositeEstimate,
    Dataset,
    DatasetHeader,
    EstimatorKind,
    GroupMap,
    PathSet,
    PatternGainModel,
    PilotMatrix,
    Sample,
)
from app.domain.estimation import (
    composite_channel,
    estimate_covariance,
    lmmse_filter,
    ls_estimate,
    make_pilots,
    noise_variance,
    partition_antennas,
    transmit,
)
from app.domain.evaluation import nmse
from app.domain.layout import LAYOUT_VERSION, VectorLayout
from app.domain.seeding import derive_seed
from app.schemas.experiment import ExperimentConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Realization:
    """Vectors of one regenerated sample plus its true composite channel."""

    estimate: CompositeEstimate
    h_es: np.ndarray
    h_pre: np.ndarray
    h_composite: np.ndarray


@dataclass(eq=False)
class Scenario:
    """Per-config quantities shared by every sample."""

    geometry: ArrayGeometry
    gains: PatternGainModel
    group_map: GroupMap
    pilots: PilotMatrix
    covariance: ChannelCovariance
    layout: VectorLayout
    n_clusters: int
    n_rays: int
    spread: float
    max_condition: float
    _filters: Dict[float, np.ndarray] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def filter(self, snr_db: float) -> np.ndarray:
        """LMMSE filter G for ``snr_db``, computed once."""
        with self._lock:
            G = self._filters.get(snr_db)
            if G is None:
                G = lmmse_filter(
                    self.pilots,
                    self.covariance,
                    noise_variance(snr_db),
                    self.geometry.N,
                    self.max_condition,
                )
                G.setflags(write=False)
                self._filters[snr_db] = G
            return G

    def paths(self, sample_seed: int) -> PathSet:
        return sample_paths(
            derive_seed(sample_seed, "paths"), self.n_clusters, self.n_rays, self.spread
        )

    def channels(self, paths: PathSet) -> ChannelTensor:
        return generate_all_modes(self.geometry, paths, self.gains)


def _geometry(config: ExperimentConfig) -> ArrayGeometry:
    if config.spacing_m is None:
        return ArrayGeometry.half_wavelength(config.M, config.N, config.carrier_hz)
    return ArrayGeometry(M=config.M, N=config.N, d=config.spacing_m, f=config.carrier_hz)


def sample_seed(master_seed: int, index: int) -> int:
    return derive_seed(master_seed, "sample", index)


def millibels(snr_db: float) -> int:
    return int(round(snr_db * 100))


class DatasetService:
    """Application service for scenario calibration and dataset construction."""

    def __init__(self, metrics: Optional[RunMetrics] = None, workers: Optional[int] = None):
        """Initialize dataset service.

        Args:
            metrics: Optional run metrics to count generated samples
            workers: Sample-construction threads (defaults to ``settings.WORKERS``)
        """
        self.metrics = metrics
        self.workers = workers or settings.WORKERS
        self._scenarios: Dict[Tuple, Scenario] = {}
        self._lock = threading.Lock()

    @staticmethod
    def _scenario_key(config: ExperimentConfig) -> Tuple:
        generator = tuple(sorted(config.generator_params().items()))
        return (config.M, config.N, config.P, config.seed, generator)

    def scenario(self, config: ExperimentConfig) -> Scenario:
        """Scenario for ``config``, calibrated on first use."""
        key = self._scenario_key(config)
        with self._lock:
            cached = self._scenarios.get(key)
        if cached is not None:
            return cached
        scenario = self._calibrate(config)
        with self._lock:
            return self._scenarios.setdefault(key, scenario)

    def _calibrate(self, config: ExperimentConfig) -> Scenario:
        started = time.perf_counter()
        geometry = _geometry(config)
        gains = build_pattern_gain_model(
            derive_seed(config.seed, "gains", config.P),
            config.P,
            config.fourier_order_theta,
            config.fourier_order_phi,
        )
        group_map = partition_antennas(config.M, config.P)
        spread = math.radians(config.ray_spread_deg)

        def composite(index: int) -> np.ndarray:
            seed = derive_seed(config.seed, "calibration", index)
            paths = sample_paths(
                derive_seed(seed, "paths"), config.n_clusters, config.n_rays, spread
            )
            return composite_channel(generate_all_modes(geometry, paths, gains), group_map)

        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            composites = list(executor.map(composite, range(config.calibration_samples)))
        covariance = estimate_covariance(composites)

        scenario = Scenario(
            geometry=geometry,
            gains=gains,
            group_map=group_map,
            pilots=make_pilots(config.M),
            covariance=covariance,
            layout=VectorLayout.for_group_map(config.N, group_map),
            n_clusters=config.n_clusters,
            n_rays=config.n_rays,
            spread=spread,
            max_condition=settings.MAX_CONDITION_NUMBER,
        )
        logger.info(
            "Scenario calibrated",
            extra={
                "M": config.M,
                "N": config.N,
                "P": config.P,
                "calibration_samples": covariance.sample_count,
                "group_sizes": group_map.group_sizes(),
                "elapsed_seconds": round(time.perf_counter() - started, 3),
            },
        )
        return scenario

    def realize(
        self,
        config: ExperimentConfig,
        seed: int,
        snr_db: float,
        estimator: EstimatorKind = EstimatorKind.LMMSE,
    ) -> Realization:
        """Regenerate one sample's vectors at ``snr_db``.

        Path draws and noise draws come from the sample seed's own child
        streams, so the same sample observed at two SNRs shares both.
        """
        paths = self.scenario(config).paths(seed)
        return self.realize_paths(config, paths, derive_seed(seed, "noise"), snr_db, estimator)

    def realize_paths(
        self,
        config: ExperimentConfig,
        paths: PathSet,
        noise_seed: int,
        snr_db: float,
        estimator: EstimatorKind = EstimatorKind.LMMSE,
    ) -> Realization:
        """Map one path set and noise seed to its (h_es, h_pre) pair.

        The result depends on nothing else: not on the sample index, the
        worker count or the order in which samples are built.
        """
        scenario = self.scenario(config)
        tensor = scenario.channels(paths)
        H_c = composite_channel(tensor, scenario.group_map)
        Y = transmit(H_c, scenario.pilots, snr_db, noise_seed)
        if estimator is EstimatorKind.LS:
            H_es = ls_estimate(Y, scenario.pilots, scenario.max_condition)
        else:
            H_es = Y @ scenario.filter(snr_db)
        estimate = CompositeEstimate(
            H_es=H_es, group_map=scenario.group_map, snr_db=snr_db, estimator=estimator
        )
        layout = scenario.layout
        return Realization(
            estimate=estimate,
            h_es=layout.vectorize_estimate(estimate.H_es),
            h_pre=layout.vectorize_targets(tensor.H_all),
            h_composite=layout.vectorize_estimate(H_c),
        )

    def build_sample(
        self, config: ExperimentConfig, seed: int, snr_db: Optional[float] = None
    ) -> Sample:
        """Build one (h_es, h_pre) pair at ``snr_db`` (default: the training SNR)."""
        if snr_db is None:
            snr_db = millibels(config.train_snr_db) / 100.0
        realization = self.realize(config, seed, snr_db)
        return Sample(h_es=realization.h_es, h_pre=realization.h_pre, seed=seed)

    def header(self, config: ExperimentConfig) -> DatasetHeader:
        ratio = config.test_fraction_ratio()
        return DatasetHeader(
            M=config.M,
            N=config.N,
            P=config.P,
            sample_count=config.sample_count,
            test_numerator=ratio.numerator,
            test_denominator=ratio.denominator,
            train_snr_millibels=millibels(config.train_snr_db),
            master_seed=config.seed,
            layout_version=LAYOUT_VERSION,
            generator=tuple(sorted(config.generator_params().items())),
        )

    def build_dataset(self, config: ExperimentConfig) -> Dataset:
        """Build every sample of ``config`` in parallel and split deterministically."""
        header = self.header(config)
        self.scenario(config)
        started = time.perf_counter()

        def build(index: int) -> Sample:
            return self.build_sample(config, sample_seed(config.seed, index), header.train_snr_db)

        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            samples = list(executor.map(build, range(header.sample_count)))

        inputs = np.stack([s.h_es for s in samples]).astype(np.complex64)
        targets = np.stack([s.h_pre for s in samples]).astype(np.complex64)
        dataset = assemble_dataset(header, inputs, targets)
        if self.metrics is not None:
            self.metrics.samples_generated.inc(header.sample_count)
        logger.info(
            "Dataset built",
            extra={
                "samples": header.sample_count,
                "train": int(dataset.train_indices.size),
                "test": int(dataset.test_indices.size),
                "train_snr_db": header.train_snr_db,
                "seed": config.seed,
                "elapsed_seconds": round(time.perf_counter() - started, 3),
            },
        )
        return dataset

    def regenerate(
        self,
        config: ExperimentConfig,
        indices: Sequence[int],
        snr_db: float,
        estimator: EstimatorKind = EstimatorKind.LMMSE,
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Stacked (inputs, targets, true composites) of the given samples at ``snr_db``."""
        self.scenario(config)

        def build(index: int) -> Realization:
            seed = sample_seed(config.seed, int(index))
            return self.realize(config, seed, snr_db, estimator)

        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            realizations = list(executor.map(build, indices))
        if self.metrics is not None:
            self.metrics.samples_generated.inc(len(realizations))
        return (
            np.stack([r.h_es for r in realizations]),
            np.stack([r.h_pre for r in realizations]),
            np.stack([r.h_composite for r in realizations]),
        )

    def estimation_nmse(
        self,
        config: ExperimentConfig,
        indices: Sequence[int],
        snr_db: float,
        estimator: EstimatorKind = EstimatorKind.LMMSE,
    ) -> float:
        """NMSE of the composite estimate against the true composite channel."""
        inputs, _, composites = self.regenerate(config, indices, snr_db, estimator)
        return nmse(composites, inputs)


def seed_manifest(config: ExperimentConfig) -> Dict[str, int]:
    """Derived seeds a run depends on, recorded next to its results."""
    seeds = {
        "master": config.seed,
        "gains": derive_seed(config.seed, "gains", config.P),
        "split": derive_seed(config.seed, "split"),
        "first_sample": sample_seed(config.seed, 0),
    }
    for kind, index in MODEL_STREAMS.items():
        seeds[f"init_{kind.value}"] = derive_seed(config.seed, "init", index)
        seeds[f"shuffle_{kind.value}"] = derive_seed(config.seed, "shuffle", index)
    return seeds
