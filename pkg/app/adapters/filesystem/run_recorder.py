"""Run-directory recorder.

A run directory holds ``config.json``, ``seeds.json``, one
``results_<axis>.csv`` per sweep, ``summary.json`` and any checkpoints or
datasets the run produced.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from app.adapters.filesystem.results_csv import read_sweep_csv, write_sweep_csv
from app.errors import FormatError
from app.ports.run_recorder import RunRecorderPort
from app.schemas.experiment import ExperimentConfig, SweepAxis
from app.schemas.results import SweepResult, SweepRow

logger = logging.getLogger(__name__)


def _write_json(path: Path, payload: Dict[str, Any]) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n", "utf-8")


def _table_fields(row: SweepRow) -> tuple:
    return (row.value, row.model, row.nmse_linear, row.nmse_db)


class FilesystemRunRecorder(RunRecorderPort):
    """Writes run artifacts below one output directory."""

    def __init__(self, run_dir: Union[str, Path]):
        self.run_dir = Path(run_dir)
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self._summary: Dict[str, Any] = {}

    def record_config(self, config: ExperimentConfig) -> None:
        payload = {"config": config.model_dump(mode="json"), "checksum": config.checksum()}
        _write_json(self.run_dir / "config.json", payload)

    def record_seeds(self, seeds: Dict[str, Any]) -> None:
        path = self.run_dir / "seeds.json"
        existing = json.loads(path.read_text("utf-8")) if path.is_file() else {}
        existing.update(seeds)
        _write_json(path, existing)

    def record_result(self, result: SweepResult) -> None:
        path = write_sweep_csv(result, self.run_dir / f"results_{result.axis.value}.csv")
        self.record_summary(
            {
                result.axis.value: {
                    "config_checksum": result.config_checksum,
                    "rows": [row.model_dump(mode="json") for row in result.rows],
                }
            }
        )
        logger.info("Sweep result recorded", extra={"path": str(path), "rows": len(result.rows)})

    def read_result(self, axis: SweepAxis) -> SweepResult:
        """Read back a recorded sweep with every field ``record_result`` wrote.

        The CSV table gives the rows; ``summary.json`` restores the per-row
        extras and the config checksum.

        Raises:
            FormatError: If the table is missing, malformed, or disagrees with the summary
        """
        path = self.run_dir / f"results_{axis.value}.csv"
        if not path.is_file():
            raise FormatError("No recorded sweep for this axis", {"offset": 0, "path": str(path)})
        table = read_sweep_csv(path)
        if table.axis is not axis:
            raise FormatError(
                "Sweep table holds another axis",
                {"offset": 0, "expected": axis.value, "actual": table.axis.value},
            )
        summary_path = self.run_dir / "summary.json"
        summary = json.loads(summary_path.read_text("utf-8")) if summary_path.is_file() else {}
        recorded = summary.get(axis.value)
        if recorded is None:
            return table

        rows = [SweepRow.model_validate(row) for row in recorded.get("rows", [])]
        if [_table_fields(row) for row in rows] != [_table_fields(row) for row in table.rows]:
            raise FormatError(
                "Sweep table and summary disagree",
                {"offset": 0, "path": str(path), "rows": len(table.rows), "summary": len(rows)},
            )
        return SweepResult(
            axis=axis, rows=rows, config_checksum=recorded.get("config_checksum", "")
        )

    def record_summary(self, summary: Dict[str, Any]) -> None:
        self._summary.update(summary)
        _write_json(self.run_dir / "summary.json", self._summary)

    def artifact_path(self, name: str) -> str:
        return str(self.run_dir / name)
