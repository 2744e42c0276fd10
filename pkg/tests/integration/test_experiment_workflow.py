"""
Integration tests for the experiment workflow
Tests spec parsing through lift, report writing and isolated batches
"""

import dataclasses
import json
import math

import pytest

from src.core.exceptions import ClassificationRejectedError, InconsistencyError
from src.models.experiment import ExperimentSpec
from src.models.holonomy import LiftMethod, ReportStatus
from src.services import experiment_runner, holonomy_engine
from src.services.experiment_runner import (
    FAILED_STATUS,
    SUMMARY_NAME,
    ExperimentRunner,
    build_bundle,
    load_batch_dir,
    run_batch_item,
)
from src.services.storage import ReportStorage


def expected_rectangle_holonomy(p, a, q, b):
    return b * (math.sinh(p + a) ** 2 - math.sinh(p) ** 2)


@pytest.mark.integration
class TestSingleExperiment:
    """Test suite for ExperimentRunner.run."""

    @pytest.fixture
    def runner(self):
        return ExperimentRunner()

    def test_run_hyperbolic_rectangle(self, runner, spec_factory):
        spec = ExperimentSpec.from_json(json.dumps(spec_factory()))
        result = runner.run(spec)
        assert result.exit_code == 0
        assert result.report.measured == pytest.approx(math.sinh(1.0) ** 2, abs=1e-12)
        assert result.report.generic_measured == pytest.approx(math.sinh(1.0) ** 2, abs=1e-6)
        assert result.report_path is None and result.trace_path is None

    def test_writes_outputs(self, runner, spec_factory, temp_directory):
        spec = ExperimentSpec.from_json(json.dumps(spec_factory(N=40, method="closed_form")))
        result = runner.run(
            spec,
            report_path=temp_directory / "out" / "rect.report.json",
            trace_path=temp_directory / "out" / "rect.trace.csv",
        )
        document = json.loads(result.report_path.read_text(encoding="utf-8"))
        assert document["status"] == "OK"
        assert document["integrator"]["method"] == "closed_form"
        lines = result.trace_path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,x,y,z"
        assert len(lines) == 42

    def test_outputs_from_spec(self, runner, spec_factory, temp_directory):
        document = spec_factory(N=40, method="closed_form")
        document["outputs"] = {"report": str(temp_directory / "from_spec.json")}
        result = runner.run(ExperimentSpec.from_json(json.dumps(document)))
        assert result.report_path == temp_directory / "from_spec.json"
        assert result.report_path.exists()

    def test_overrides(self, runner, spec_factory):
        spec = ExperimentSpec.from_json(json.dumps(spec_factory(N=400)))
        result = runner.run(spec, steps=20, method=LiftMethod.CLOSED_FORM)
        assert result.report.integrator.N == 20
        assert result.report.generic_measured is None

    def test_non_orthonormal_input_is_orthonormalized(self, runner, spec_factory):
        spec = ExperimentSpec.from_json(json.dumps(spec_factory(v=[[2.0, 0.0]], w=[[1.0, 3.0]])))
        bundle = build_bundle(spec)
        assert bundle.classification.tag.value == "Complex"
        result = runner.run(spec, steps=40, method=LiftMethod.CLOSED_FORM)
        assert result.report.measured == pytest.approx(math.sinh(1.0) ** 2, abs=1e-12)

    def test_rejected_plane(self, runner, spec_factory):
        spec = ExperimentSpec.from_json(
            json.dumps(
                spec_factory(
                    v=[[1.0, 0.0], [0.0, 0.0]],
                    w=[[0.0, 1.0 / math.sqrt(2.0)], [1.0 / math.sqrt(2.0), 0.0]],
                )
            )
        )
        with pytest.raises(ClassificationRejectedError) as exc_info:
            runner.run(spec)
        assert exc_info.value.details["imaginary_pairing"] == pytest.approx(1.0 / math.sqrt(2.0))

    def test_heisenberg_circle(self, runner, spec_factory):
        document = spec_factory(bundle="Heisenberg", v=[[1.0, 0.0], [0.0, 0.0]], w=[[0.0, 0.0], [1.0, 0.0]])
        document["curve"] = {"kind": "Circle", "center": [-1.0, 2.0], "radius": 1.5}
        result = runner.run(ExperimentSpec.from_json(json.dumps(document)), steps=200)
        assert result.report.classification == "TotallyReal"
        assert result.report.measured == pytest.approx(0.0, abs=1e-12)
        assert result.report.length == pytest.approx(3.0 * math.pi, abs=1e-3)

    def test_inconsistent_exit_code(self, runner, spec_factory, monkeypatch):
        real_generic = holonomy_engine.lift_generic

        def offset_generic(bundle, curve, N):
            trace = real_generic(bundle, curve, N)
            return dataclasses.replace(trace, z=trace.z * 1.01)

        monkeypatch.setattr(holonomy_engine, "lift_generic", offset_generic)
        result = runner.run(ExperimentSpec.from_json(json.dumps(spec_factory(N=100))))
        assert result.report.status is ReportStatus.INCONSISTENT
        with pytest.raises(InconsistencyError) as excinfo:
            result.raise_for_status()
        assert excinfo.value.exit_code == 3
        assert excinfo.value.details["consistency_gap"] == result.report.consistency_gap


@pytest.mark.integration
class TestBatch:
    """Test suite for isolated batch runs."""

    def test_batch_isolates_failures(self, batch_directory):
        summary = ExperimentRunner().batch(load_batch_dir(batch_directory), batch_directory)
        assert [row["spec_id"] for row in summary.rows] == ["a_unit", "b_shifted", "c_rejected"]
        assert summary.failed == 1
        assert summary.exit_code == 1

        rows = ReportStorage.read_summary(batch_directory / SUMMARY_NAME)
        assert [row["status"] for row in rows] == ["OK", "OK", FAILED_STATUS]
        assert rows[2]["error"].startswith("classification_rejected")
        assert float(rows[1]["measured"]) == pytest.approx(
            expected_rectangle_holonomy(0.5, 0.25, 1.0, 0.5), abs=1e-12
        )
        assert (batch_directory / "a_unit.report.json").exists()
        assert not (batch_directory / "c_rejected.report.json").exists()

    def test_batch_skips_previous_reports(self, batch_directory):
        runner = ExperimentRunner()
        runner.batch(load_batch_dir(batch_directory), batch_directory, method=LiftMethod.CLOSED_FORM)
        names = [name for name, _ in load_batch_dir(batch_directory)]
        assert names == ["a_unit", "b_shifted", "c_rejected"]

    def test_batch_traces(self, batch_directory):
        ExperimentRunner().batch(
            load_batch_dir(batch_directory), batch_directory, steps=16, write_traces=True
        )
        assert (batch_directory / "a_unit.trace.csv").exists()

    def test_parallel_matches_serial(self, batch_directory, temp_directory):
        items = load_batch_dir(batch_directory)
        serial = ExperimentRunner().batch(items, batch_directory / "serial", steps=40, workers=1)
        parallel = ExperimentRunner().batch(items, batch_directory / "parallel", steps=40, workers=2)
        assert serial.rows == parallel.rows

    def test_empty_batch(self, temp_directory):
        summary = ExperimentRunner().batch([], temp_directory)
        assert summary.rows == []
        assert summary.exit_code == 0
        assert summary.max_residual is None
        assert ReportStorage.read_summary(temp_directory / SUMMARY_NAME) == []

    def test_invalid_json_item(self, temp_directory):
        row = run_batch_item(("broken", "{", str(temp_directory), None, None, False))
        assert row["spec_id"] == "broken"
        assert row["status"] == FAILED_STATUS
        assert row["error"].startswith("spec_validation")

    def test_default_id_uses_file_stem(self, spec_factory, temp_directory):
        document = spec_factory(N=20, method="closed_form")
        del document["id"]
        row = run_batch_item(("from_stem", json.dumps(document), str(temp_directory), None, None, False))
        assert row["spec_id"] == "from_stem"
        assert (temp_directory / "from_stem.report.json").exists()

    def test_failed_item_writes_error_file(self, batch_directory):
        ExperimentRunner().batch(load_batch_dir(batch_directory), batch_directory, steps=16)
        diagnostic = json.loads((batch_directory / "c_rejected.error.json").read_text(encoding="utf-8"))
        assert diagnostic["spec_id"] == "c_rejected"
        assert diagnostic["type"] == "classification_rejected"
        assert diagnostic["exit_code"] == 1
        assert [name for name, _ in load_batch_dir(batch_directory)] == ["a_unit", "b_shifted", "c_rejected"]

    def test_unexpected_exception_is_isolated(self, spec_factory, temp_directory, monkeypatch):
        real_holonomy = experiment_runner.holonomy_with_trace

        def overflowing(bundle, curve, N, method):
            if curve.p > 100.0:
                raise OverflowError("math range error")
            return real_holonomy(bundle, curve, N, method)

        monkeypatch.setattr(experiment_runner, "holonomy_with_trace", overflowing)
        items = [
            ("valid", json.dumps(spec_factory("valid", N=40))),
            ("far_out", json.dumps(spec_factory("far_out", p=800.0, N=40))),
        ]
        summary = ExperimentRunner().batch(items, temp_directory, workers=1)
        assert [row["status"] for row in summary.rows] == ["OK", FAILED_STATUS]
        assert summary.rows[1]["error"] == "OverflowError: math range error"
        assert summary.exit_code == 1

        rows = ReportStorage.read_summary(temp_directory / SUMMARY_NAME)
        assert [row["spec_id"] for row in rows] == ["valid", "far_out"]
        diagnostic = json.loads((temp_directory / "far_out.error.json").read_text(encoding="utf-8"))
        assert diagnostic["type"] == "internal_error"
        assert diagnostic["details"]["exception"] == "OverflowError"

    def test_overflowing_rectangle_fails_alone(self, spec_factory, temp_directory):
        items = [
            ("valid", json.dumps(spec_factory("valid", N=40))),
            ("far_out", json.dumps(spec_factory("far_out", p=800.0, N=40))),
        ]
        summary = ExperimentRunner().batch(items, temp_directory)
        assert [row["status"] for row in summary.rows] == ["OK", FAILED_STATUS]
        assert (temp_directory / SUMMARY_NAME).exists()
        assert (temp_directory / "valid.report.json").exists()
        assert not (temp_directory / "far_out.report.json").exists()
