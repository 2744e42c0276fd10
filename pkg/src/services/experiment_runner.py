"""Experiment driver: spec in, report (and optional trace) out."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.core.config import settings
from src.core.exceptions import HolonomyError, InconsistencyError
from src.core.logging import LoggedOperation, LoggerMixin
from src.models.experiment import ExperimentSpec
from src.models.holonomy import HolonomyReport, LiftMethod, LiftTrace, ReportStatus
from src.models.surface import BundleDescriptor
from src.services.bundle_geometry import descriptor, orthonormalize_plane
from src.services.curves_areas import validate_curve
from src.services.holonomy_engine import holonomy_with_trace
from src.services.storage import ReportStorage

REPORT_SUFFIX = ".report.json"
TRACE_SUFFIX = ".trace.csv"
ERROR_SUFFIX = ".error.json"
SUMMARY_NAME = "summary.csv"
FAILED_STATUS = "FAILED"


@dataclass
class RunResult:
    spec: ExperimentSpec
    report: HolonomyReport
    trace: LiftTrace
    report_path: Optional[Path] = None
    trace_path: Optional[Path] = None

    def raise_for_status(self) -> None:
        """Raise :class:`InconsistencyError` for an INCONSISTENT report."""
        report = self.report
        if report.status is ReportStatus.INCONSISTENT:
            raise InconsistencyError(
                "closed-form and generic lifts disagree",
                {
                    "spec_id": self.spec.id,
                    "measured": report.measured,
                    "generic_measured": report.generic_measured,
                    "consistency_gap": report.consistency_gap,
                    "threshold": settings.INCONSISTENCY_THRESHOLD,
                },
            )


@dataclass
class BatchSummary:
    rows: List[Dict[str, Any]] = field(default_factory=list)
    summary_path: Optional[Path] = None

    @property
    def failed(self) -> int:
        return sum(1 for row in self.rows if row["status"] == FAILED_STATUS)

    @property
    def inconsistent(self) -> int:
        return sum(1 for row in self.rows if row["status"] == ReportStatus.INCONSISTENT.value)

    @property
    def max_residual(self) -> Optional[float]:
        residuals = [row["residual"] for row in self.rows if row.get("residual") is not None]
        return max(residuals) if residuals else None

    @property
    def exit_code(self) -> int:
        if self.failed:
            return 1
        if self.inconsistent:
            return 3
        return 0


def build_bundle(spec: ExperimentSpec) -> BundleDescriptor:
    """Descriptor for the spec's bundle and plane (Gram–Schmidt applied)."""
    v, w = spec.surface.vectors()
    plane = orthonormalize_plane(v, w)
    return descriptor(spec.bundle, spec.n, plane)


class ExperimentRunner(LoggerMixin):
    """Runs single experiments and isolated batches."""

    def __init__(self, storage: Optional[ReportStorage] = None):
        self.storage = storage or ReportStorage()

    def run(
        self,
        spec: ExperimentSpec,
        steps: Optional[int] = None,
        method: Optional[LiftMethod] = None,
        report_path: Optional[Path] = None,
        trace_path: Optional[Path] = None,
    ) -> RunResult:
        """Compute one report; output paths default to the spec's ``outputs``."""
        N = steps or spec.integrator.N
        lift_method = method or spec.integrator.method
        report_target = report_path or _optional_path(spec.outputs.report)
        trace_target = trace_path or _optional_path(spec.outputs.trace)

        with LoggedOperation(
            "experiment", logger_name=self.__class__.__name__, spec_id=spec.id, N=N
        ):
            validate_curve(spec.curve)
            bundle = build_bundle(spec)
            report, trace = holonomy_with_trace(bundle, spec.curve, N, lift_method)

        result = RunResult(spec=spec, report=report, trace=trace)
        if report_target is not None:
            result.report_path = self.storage.write_report(report, report_target)
        if trace_target is not None:
            result.trace_path = self.storage.write_trace(trace, trace_target)

        if report.status is ReportStatus.INCONSISTENT:
            self.log_warning("Experiment inconsistent", spec_id=spec.id, gap=report.consistency_gap)
        else:
            self.log_info(
                "Experiment finished",
                spec_id=spec.id,
                measured=report.measured,
                predicted=report.predicted,
                residual=report.residual,
            )
        return result

    def batch(
        self,
        items: Sequence[Tuple[str, str]],
        output_dir: Path,
        steps: Optional[int] = None,
        method: Optional[LiftMethod] = None,
        workers: Optional[int] = None,
        write_traces: bool = False,
    ) -> BatchSummary:
        """Run (name, spec JSON) items independently and write ``summary.csv``.

        A failing item becomes a FAILED row; the others are unaffected.
        """
        output_dir = Path(output_dir)
        worker_count = workers or settings.BATCH_WORKERS
        jobs = [(name, text, str(output_dir), steps, method, write_traces) for name, text in items]

        with LoggedOperation(
            "batch", logger_name=self.__class__.__name__, items=len(jobs), workers=worker_count
        ):
            if worker_count > 1 and len(jobs) > 1:
                with ProcessPoolExecutor(max_workers=worker_count) as pool:
                    rows = list(pool.map(run_batch_item, jobs))
            else:
                rows = [run_batch_item(job) for job in jobs]

        summary = BatchSummary(rows=rows)
        summary.summary_path = self.storage.write_summary(rows, output_dir / SUMMARY_NAME)
        self.log_info(
            "Batch finished",
            items=len(rows),
            failed=summary.failed,
            inconsistent=summary.inconsistent,
            max_residual=summary.max_residual,
        )
        return summary


def load_batch_dir(directory: Path) -> List[Tuple[str, str]]:
    """Spec files in name order; reports written by earlier runs are skipped."""
    directory = Path(directory)
    items = []
    for path in sorted(directory.glob("*.json")):
        if path.name.endswith((REPORT_SUFFIX, ERROR_SUFFIX)):
            continue
        items.append((path.stem, path.read_text(encoding="utf-8")))
    return items


def run_batch_item(job: Tuple[str, str, str, Optional[int], Optional[LiftMethod], bool]) -> Dict[str, Any]:
    """One isolated batch item; module-level so worker processes can import it.

    Any exception becomes a FAILED row and a ``<id>.error.json`` diagnostic.
    """
    name, text, output_dir, steps, method, write_traces = job
    runner = ExperimentRunner()
    out = Path(output_dir)
    spec_id = name
    try:
        spec = ExperimentSpec.from_json(text)
        spec_id = spec.id if spec.id != "experiment" else name
        result = runner.run(
            spec,
            steps=steps,
            method=method,
            report_path=out / f"{spec_id}{REPORT_SUFFIX}",
            trace_path=out / f"{spec_id}{TRACE_SUFFIX}" if write_traces else None,
        )
        report = result.report
        return {
            "spec_id": spec_id,
            "residual": report.residual,
            "status": report.status.value,
            "measured": report.measured,
            "predicted": report.predicted,
            "error": None,
        }
    except HolonomyError as e:
        runner.log_error("Batch item failed", spec_id=spec_id, error_type=e.error_type, error_message=e.message)
        diagnostic = e.to_dict()
        error = f"{e.error_type}: {e.message}"
    except Exception as e:
        runner.log_error("Batch item crashed", error=e, spec_id=spec_id)
        diagnostic = {
            "error": str(e) or type(e).__name__,
            "type": "internal_error",
            "exit_code": 2,
            "details": {"exception": type(e).__name__},
        }
        error = f"{type(e).__name__}: {e}"

    runner.storage.write_error({"spec_id": spec_id, **diagnostic}, out / f"{spec_id}{ERROR_SUFFIX}")
    return {
        "spec_id": spec_id,
        "residual": None,
        "status": FAILED_STATUS,
        "measured": None,
        "predicted": None,
        "error": error,
    }


def _optional_path(value: Optional[str]) -> Optional[Path]:
    return Path(value) if value else None
