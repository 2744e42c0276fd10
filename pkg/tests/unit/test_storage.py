"""
Unit tests for storage
Tests atomic writes and the report, trace and summary formats
"""

import json
import math

import pytest

from src.models.curve import RectangleCurve
from src.models.holonomy import LiftMethod
from src.models.surface import BundleKind
from src.services.bundle_geometry import descriptor
from src.services.holonomy_engine import holonomy_with_trace
from src.services.storage import (
    SUMMARY_HEADER,
    TRACE_HEADER,
    ReportStorage,
    atomic_write_text,
    format_float,
    summary_csv,
    trace_csv,
)


@pytest.fixture
def report_and_trace(complex_plane):
    bundle = descriptor(BundleKind.CPX_HYPERBOLIC, 1, complex_plane)
    curve = RectangleCurve(p=0.0, a=1.0, q=0.0, b=1.0)
    return holonomy_with_trace(bundle, curve, 8, LiftMethod.CLOSED_FORM)


@pytest.fixture
def storage():
    return ReportStorage()


class TestAtomicWrite:
    """Test suite for atomic_write_text."""

    def test_creates_parents(self, temp_directory):
        target = temp_directory / "nested" / "deeper" / "out.txt"
        atomic_write_text(target, "hello\n")
        assert target.read_text(encoding="utf-8") == "hello\n"

    def test_replaces_existing(self, temp_directory):
        target = temp_directory / "out.txt"
        target.write_text("old", encoding="utf-8")
        atomic_write_text(target, "new")
        assert target.read_text(encoding="utf-8") == "new"

    def test_leaves_no_temporary_files(self, temp_directory):
        atomic_write_text(temp_directory / "out.txt", "x")
        assert [p.name for p in temp_directory.iterdir()] == ["out.txt"]


class TestFormats:
    """Test suite for float formatting and CSV documents."""

    def test_format_float_round_trips(self):
        value = math.pi / 3.0
        assert float(format_float(value)) == value

    def test_format_float_none(self):
        assert format_float(None) == ""

    def test_format_float_digits(self):
        assert format_float(1.0 / 3.0, 6) == "0.333333"

    def test_trace_csv(self, report_and_trace):
        _, trace = report_and_trace
        lines = trace_csv(trace).splitlines()
        assert lines[0] == ",".join(TRACE_HEADER)
        assert len(lines) == trace.steps + 2
        t, x, y, z = (float(v) for v in lines[-1].split(","))
        assert t == pytest.approx(1.0)
        assert z == trace.z[-1]

    def test_summary_csv(self):
        rows = [
            {"spec_id": "a", "residual": 0.1, "status": "OK", "measured": 1.5, "predicted": 1.5},
            {"spec_id": "b", "status": "FAILED", "error": "classification_rejected"},
        ]
        lines = summary_csv(rows).splitlines()
        assert lines[0] == ",".join(SUMMARY_HEADER)
        assert lines[1] == "a,0.10000000000000001,OK,1.5,1.5,"
        assert lines[2] == "b,,FAILED,,,classification_rejected"


class TestReportStorage:
    """Test suite for ReportStorage."""

    def test_write_report(self, storage, report_and_trace, temp_directory):
        report, _ = report_and_trace
        path = storage.write_report(report, temp_directory / "r.report.json")
        document = json.loads(path.read_text(encoding="utf-8"))
        assert document == json.loads(json.dumps(report.to_json_dict()))
        assert list(document)[:3] == ["kind", "measured", "measured_mod"]

    def test_report_is_deterministic(self, storage, report_and_trace, temp_directory):
        report, _ = report_and_trace
        first = storage.write_report(report, temp_directory / "a.json").read_bytes()
        second = storage.write_report(report, temp_directory / "b.json").read_bytes()
        assert first == second

    def test_write_trace(self, storage, report_and_trace, temp_directory):
        _, trace = report_and_trace
        path = storage.write_trace(trace, temp_directory / "r.trace.csv")
        assert path.read_text(encoding="utf-8").startswith("t,x,y,z\n")

    def test_summary_round_trip(self, storage, temp_directory):
        rows = [{"spec_id": "a", "residual": 0.25, "status": "OK", "measured": 1.0, "predicted": 0.75}]
        path = storage.write_summary(rows, temp_directory / "summary.csv")
        read = ReportStorage.read_summary(path)
        assert read == [
            {"spec_id": "a", "residual": "0.25", "status": "OK", "measured": "1", "predicted": "0.75", "error": ""}
        ]

    def test_write_error(self, storage, temp_directory):
        path = storage.write_error({"error": "bad", "exit_code": 1}, temp_directory / "e.json")
        assert json.loads(path.read_text(encoding="utf-8")) == {"error": "bad", "exit_code": 1}
