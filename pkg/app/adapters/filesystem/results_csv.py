"""CSV encoding of sweep results.

Header: ``<axis>,nmse_linear,nmse_db,model`` where ``<axis>`` is ``snr_db``,
``antennas`` or ``modes``. Floats are written with ``repr`` so a table read
back holds exactly the values that were written.
"""

import csv
import io
from pathlib import Path
from typing import Union

from app.errors import FormatError
from app.schemas.experiment import SweepAxis
from app.schemas.results import SweepResult, SweepRow

COLUMNS = ("nmse_linear", "nmse_db", "model")
_AXES = {axis.column: axis for axis in SweepAxis}


def _format_value(axis: SweepAxis, value: float) -> str:
    if axis is SweepAxis.SNR:
        return repr(float(value))
    return str(int(value))


def format_sweep_csv(result: SweepResult) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([result.axis.column, *COLUMNS])
    for row in result.rows:
        writer.writerow(
            [
                _format_value(result.axis, row.value),
                repr(float(row.nmse_linear)),
                repr(float(row.nmse_db)),
                row.model.value,
            ]
        )
    return buffer.getvalue()


def write_sweep_csv(result: SweepResult, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_sweep_csv(result), encoding="utf-8")
    return path


def parse_sweep_csv(text: str) -> SweepResult:
    """Parse a sweep table.

    Only the table columns are restored; ``FilesystemRunRecorder.read_result``
    adds the per-row extras and checksum kept in the run summary.

    Raises:
        FormatError: If the header is not a sweep header or a row is malformed
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or len(header) != 4 or tuple(header[1:]) != COLUMNS or header[0] not in _AXES:
        raise FormatError("Not a sweep result table", {"offset": 0, "header": header})
    axis = _AXES[header[0]]
    rows = []
    for line, record in enumerate(reader, start=2):
        if not record:
            continue
        try:
            value, linear, db, model = record
            rows.append(
                SweepRow(
                    value=float(value),
                    model=model,
                    nmse_linear=float(linear),
                    nmse_db=float(db),
                )
            )
        except ValueError as exc:
            raise FormatError(
                f"Malformed sweep row on line {line}", {"offset": line, "reason": str(exc)}
            ) from exc
    return SweepResult(axis=axis, rows=rows)


def read_sweep_csv(path: Union[str, Path]) -> SweepResult:
    return parse_sweep_csv(Path(path).read_text(encoding="utf-8"))
