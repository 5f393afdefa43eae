"""In-memory run recorder for testing."""

from typing import Any, Dict, List, Optional

from app.ports.run_recorder import RunRecorderPort
from app.schemas.experiment import ExperimentConfig
from app.schemas.results import SweepResult


class InMemoryRunRecorder(RunRecorderPort):
    """Collects run artifacts in memory."""

    def __init__(self):
        """Initialize in-memory storage."""
        self.config: Optional[ExperimentConfig] = None
        self.seeds: Dict[str, Any] = {}
        self.results: List[SweepResult] = []
        self.summary: Dict[str, Any] = {}

    def record_config(self, config: ExperimentConfig) -> None:
        self.config = config

    def record_seeds(self, seeds: Dict[str, Any]) -> None:
        self.seeds.update(seeds)

    def record_result(self, result: SweepResult) -> None:
        self.results.append(result)

    def record_summary(self, summary: Dict[str, Any]) -> None:
        self.summary.update(summary)

    def artifact_path(self, name: str) -> str:
        return f"memory://{name}"
