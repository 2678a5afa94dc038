import json
import math
import time

import pytest
from pydantic import ValidationError

from src import __version__
from src.config import Settings
from src.lemma_suite import VerificationReport
from src.manifest import (
    CURVE_HEADER,
    SCHEMA_VERSION,
    ComputeRecord,
    RunManifest,
    VerificationRecord,
    manifest_path,
    render_json,
    schemas,
    significant,
    write_csv,
    write_json,
)


def test_manifest_snapshots_settings_and_overrides():
    manifest = RunManifest.build(["curve", "--epsilon", "0.3"], Settings(), 3, time.monotonic(), {"r_points": 50.0})

    assert manifest.command_line == ["curve", "--epsilon", "0.3"]
    assert manifest.seed == 3
    assert manifest.grids["r_points"] == 50.0
    assert manifest.grids["omega_points"] == 10_000.0
    assert manifest.tolerances["proven_slack"] == 1e-10
    assert manifest.artifact_version == __version__
    assert manifest.schema_version == SCHEMA_VERSION
    assert manifest.wall_time_seconds >= 0.0


def test_manifest_rejects_negative_seed():
    with pytest.raises(ValidationError):
        RunManifest.build([], Settings(), -1, time.monotonic())


def test_compute_record_validates_regime():
    record = ComputeRecord(value=0.5, alpha="2", regime="super1", epsilon=0.3, exact=True)
    assert record.model_dump()["extras"] == {}

    with pytest.raises(ValidationError):
        ComputeRecord(value=0.5, alpha="2", regime="bogus", epsilon=0.3, exact=True)


def test_verification_record_reads_report_payload():
    report = VerificationReport("demo", False, 2.0, (0.1,), 10, 1.0, skipped_points=1, notes=("x",))

    record = VerificationRecord.model_validate(report.to_dict())

    assert record.passed is False
    assert record.model_dump(by_alias=True)["pass"] is False


def test_schemas_cover_every_artifact():
    payload = schemas()

    assert payload["schema_version"] == SCHEMA_VERSION
    for key in ("manifest", "compute", "condition1", "phase_point", "verification_report", "curve_csv"):
        assert key in payload
    assert "pass" in payload["verification_report"]["properties"]
    assert payload["curve_csv"]["header"] == list(CURVE_HEADER)
    json.dumps(payload)


def test_csv_writer_is_deterministic(tmp_path):
    path = tmp_path / "nested" / "curve.csv"

    write_csv(path, CURVE_HEADER, [["1", "0.5", "wyner"], ["inf", "0.75", "exact"]])
    first = path.read_bytes()
    write_csv(path, CURVE_HEADER, [["1", "0.5", "wyner"], ["inf", "0.75", "exact"]])

    assert first == b"alpha,gamma_bits,regime\n1,0.5,wyner\ninf,0.75,exact\n"
    assert path.read_bytes() == first
    assert [entry.name for entry in path.parent.iterdir()] == ["curve.csv"]


def test_json_writer_sorts_keys(tmp_path):
    path = write_json(tmp_path / "out.json", {"b": 1, "a": [1, 2]})

    assert json.loads(path.read_text(encoding="utf-8")) == {"a": [1, 2], "b": 1}
    assert path.read_text(encoding="utf-8").index('"a"') < path.read_text(encoding="utf-8").index('"b"')


def test_manifest_path_sits_next_to_output(tmp_path):
    assert manifest_path(tmp_path / "curve.csv") == tmp_path / "curve.csv.manifest.json"


def test_unwritable_target_raises_os_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x", encoding="utf-8")

    with pytest.raises(OSError):
        write_json(blocker / "out.json", {})


def test_significant_rounds_only_finite_floats():
    rounded = significant({"x": 0.1234567890123456, "n": 3, "b": True, "i": math.inf, "xs": [2.0 / 3.0, "t"]})

    assert rounded == {"x": 0.123456789012, "n": 3, "b": True, "i": math.inf, "xs": [0.666666666667, "t"]}
    assert rounded["b"] is True


def test_render_json_prints_twelve_digits():
    text = render_json({"value": 1.0 / 3.0})

    assert json.loads(text) == {"value": 0.333333333333}
    assert "0.3333333333333" not in text
