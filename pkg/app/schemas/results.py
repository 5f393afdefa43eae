"""
Pydantic schemas for sweep results.
"""

import math
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from app.domain.entities import ModelKind
from app.schemas.experiment import SweepAxis


class SweepRow(BaseModel):
    """NMSE of one model at one sweep point."""

    value: float
    model: ModelKind
    nmse_linear: float = Field(..., ge=0)
    nmse_db: float
    sample_count: Optional[int] = None
    parameter_count: Optional[int] = None
    estimation_nmse_db: Optional[float] = None

    @model_validator(mode="after")
    def validate_db(self) -> "SweepRow":
        expected = 10.0 * math.log10(self.nmse_linear) if self.nmse_linear > 0 else -math.inf
        if not math.isclose(self.nmse_db, expected, rel_tol=1e-9, abs_tol=1e-9):
            raise ValueError(f"nmse_db={self.nmse_db} does not equal 10 log10(nmse_linear)")
        return self


class SweepResult(BaseModel):
    """All rows of a sweep plus the checksum of the config that produced them."""

    axis: SweepAxis
    rows: List[SweepRow] = Field(default_factory=list)
    config_checksum: str = ""

    def values(self) -> List[float]:
        seen = []
        for row in self.rows:
            if row.value not in seen:
                seen.append(row.value)
        return seen

    def nmse_db(self, model: ModelKind) -> List[float]:
        return [row.nmse_db for row in self.rows if row.model == model]
