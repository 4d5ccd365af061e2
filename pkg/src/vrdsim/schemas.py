"""Pydantic models shared by the experiment runner, the HTTP API and the CLI."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

__all__ = [
    "EXPERIMENTS",
    "SCHEMA_VERSION",
    "CSV_COLUMNS",
    "ExperimentConfig",
    "ExperimentRequest",
    "ResultRecord",
    "RecordsResponse",
]

EXPERIMENTS = ("coherence", "entangle", "teleport", "qfi")
SCHEMA_VERSION = 1

# Fixed CSV column order; also the JSON key order of a ResultRecord.
CSV_COLUMNS = [
    "schema_version",
    "experiment",
    "mode",
    "xi",
    "metric",
    "value",
    "stderr",
    "exact",
    "cost",
    "shots",
    "seed",
    "noise_p",
    "note",
]


class ExperimentRequest(BaseModel):
    """Parameters of one experiment run (everything except the experiment name)."""

    xi: Optional[list[float]] = Field(default=None, description="Werner parameters; experiment default grid if omitted")
    shots: int = Field(default=100_000, gt=0, description="shots per estimate / per tomography setting")
    seed: int = Field(default=0, description="root seed; identical seeds give byte-identical output")
    noise_p: float = Field(default=0.0, ge=0.0, le=1.0, description="depolarizing noise on the prepared inputs")
    mode: Literal["exact", "sampled"] = "exact"

    @field_validator("xi")
    @classmethod
    def _xi_in_range(cls, v: Optional[list[float]]) -> Optional[list[float]]:
        if v is not None:
            if not v:
                raise ValueError("xi list must not be empty")
            for x in v:
                if not 0.0 <= x <= 1.0:
                    raise ValueError(f"xi values must lie in [0, 1], got {x}")
        return v


class ExperimentConfig(ExperimentRequest):
    experiment: Literal["coherence", "entangle", "teleport", "qfi"]


class ResultRecord(BaseModel):
    """One metric of one run; ``exact`` carries the analytic value whenever known."""

    schema_version: int = SCHEMA_VERSION
    experiment: str
    mode: str
    xi: Optional[float] = None
    metric: str
    value: float
    stderr: float = 0.0
    exact: Optional[float] = None
    cost: Optional[float] = None
    shots: Optional[int] = None
    seed: int = 0
    noise_p: float = 0.0
    note: str = ""


class RecordsResponse(BaseModel):
    records: list[ResultRecord]
