"""Run recorder port - interface for writing the artifacts of one run."""

from abc import ABC, abstractmethod
from typing import Any, Dict

from app.schemas.experiment import ExperimentConfig
from app.schemas.results import SweepResult


class RunRecorderPort(ABC):
    """Port for recording configs, seeds and results of a run."""

    @abstractmethod
    def record_config(self, config: ExperimentConfig) -> None:
        """Record the validated configuration the run used."""
        pass

    @abstractmethod
    def record_seeds(self, seeds: Dict[str, Any]) -> None:
        """Record derived seeds so the run can be reproduced."""
        pass

    @abstractmethod
    def record_result(self, result: SweepResult) -> None:
        """Record a sweep result (CSV rows plus summary)."""
        pass

    @abstractmethod
    def record_summary(self, summary: Dict[str, Any]) -> None:
        """Merge extra fields into the run summary."""
        pass

    @abstractmethod
    def artifact_path(self, name: str) -> str:
        """Location for an auxiliary artifact such as a checkpoint or dataset."""
        pass
