"""Run manifests, versioned output schemas and atomic artifact writers."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import tempfile
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from pydantic import BaseModel, Field, TypeAdapter, field_validator

from . import __version__
from .config import Settings
from .negative_orders import Condition1Report, PhasePoint


logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
CURVE_HEADER = ("alpha", "gamma_bits", "regime")
PRINTED_DIGITS = 12
REGIMES = ("zero", "wyner", "super1", "exact", "negative-ub")

__all__ = [
    "CURVE_HEADER",
    "ComputeRecord",
    "RunManifest",
    "SCHEMA_VERSION",
    "VerificationRecord",
    "manifest_path",
    "render_json",
    "schemas",
    "significant",
    "write_csv",
    "write_json",
]


class RunManifest(BaseModel):
    """Provenance of one CLI run; accompanies or is embedded in every output."""

    command_line: list[str]
    tolerances: dict[str, float]
    grids: dict[str, float]
    seed: int = Field(ge=0)
    artifact_version: str = __version__
    schema_version: str = SCHEMA_VERSION
    started_at: str
    wall_time_seconds: float = Field(ge=0.0)

    @classmethod
    def build(
        cls,
        argv: Sequence[str],
        settings: Settings,
        seed: int,
        started: float,
        grids: Optional[dict[str, float]] = None,
    ) -> "RunManifest":
        """Snapshot settings and timing; ``started`` is a ``time.monotonic()`` value."""

        sizes = {name: float(value) for name, value in settings.grid.model_dump().items()}
        sizes.update(grids or {})
        return cls(
            command_line=list(argv),
            tolerances=settings.tolerances.model_dump(),
            grids=dict(sorted(sizes.items())),
            seed=seed,
            started_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            wall_time_seconds=max(time.monotonic() - started, 0.0),
        )


class ComputeRecord(BaseModel):
    value: float
    alpha: str
    regime: str
    epsilon: float
    exact: bool
    witness: Optional[dict[str, float]] = None
    extended_value: Optional[str] = None
    extras: dict[str, Any] = Field(default_factory=dict)

    @field_validator("regime")
    @classmethod
    def validate_regime(cls, value: str) -> str:
        if value not in REGIMES:
            raise ValueError(f"Unknown regime: {value}")
        return value


class VerificationRecord(BaseModel):
    suite: str
    passed: bool = Field(alias="pass")
    worst_violation: float
    worst_location: list[float]
    points_checked: int
    tolerance_used: float
    skipped_points: int = 0
    notes: list[str] = Field(default_factory=list)


def schemas() -> dict[str, Any]:
    """JSON schemas of every artifact, keyed by artifact name."""

    return {
        "schema_version": SCHEMA_VERSION,
        "manifest": RunManifest.model_json_schema(),
        "compute": ComputeRecord.model_json_schema(),
        "condition1": TypeAdapter(Condition1Report).json_schema(),
        "phase_point": TypeAdapter(PhasePoint).json_schema(),
        "verification_report": VerificationRecord.model_json_schema(by_alias=True),
        "curve_csv": {
            "encoding": "utf-8",
            "line_terminator": "\\n",
            "header": list(CURVE_HEADER),
            "columns": {
                "alpha": "decimal with 12 significant digits, or inf / -inf",
                "gamma_bits": "decimal with 12 significant digits",
                "regime": list(REGIMES),
            },
            "manifest": "<out>.manifest.json",
        },
    }


def manifest_path(path: Path | str) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".manifest.json")


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return _write_atomic(Path(path), buffer.getvalue())


def significant(payload: Any, digits: int = PRINTED_DIGITS) -> Any:
    """Round every finite float of a JSON-ready payload to ``digits`` significant digits."""

    if isinstance(payload, bool) or not isinstance(payload, (float, dict, list, tuple)):
        return payload
    if isinstance(payload, float):
        return float(f"{payload:.{digits}g}") if math.isfinite(payload) else payload
    if isinstance(payload, dict):
        return {key: significant(value, digits) for key, value in payload.items()}
    return [significant(value, digits) for value in payload]


def render_json(payload: dict[str, Any]) -> str:
    return json.dumps(significant(payload), indent=2, sort_keys=True)


def write_json(path: Path | str, payload: dict[str, Any]) -> Path:
    return _write_atomic(Path(path), render_json(payload) + "\n")


# Internal helpers ---------------------------------------------------------
def _write_atomic(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_path, path)
    finally:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
    logger.info("Wrote artifact", extra={"event": "output_written", "path": str(path), "bytes": len(text)})
    return path
