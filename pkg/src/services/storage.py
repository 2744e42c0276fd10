"""Atomic report, trace and summary writers."""
import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from src.core.config import settings
from src.core.logging import LoggerMixin
from src.models.holonomy import HolonomyReport, LiftTrace

TRACE_HEADER = ("t", "x", "y", "z")
SUMMARY_HEADER = ("spec_id", "residual", "status", "measured", "predicted", "error")


def atomic_write_text(path: Path, text: str) -> None:
    """Write through a temporary sibling file and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def format_float(value: Optional[float], digits: Optional[int] = None) -> str:
    if value is None:
        return ""
    return f"{value:.{digits or settings.CSV_SIGNIFICANT_DIGITS}g}"


def report_json(report: HolonomyReport) -> str:
    """Deterministic JSON document: fixed key order, shortest round-trip floats."""
    return json.dumps(report.to_json_dict(), indent=2) + "\n"


def trace_csv(trace: LiftTrace) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for row in trace.rows():
        writer.writerow([format_float(v) for v in row])
    return buffer.getvalue()


def summary_csv(rows: Iterable[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.get("spec_id", ""),
                format_float(row.get("residual")),
                row.get("status", ""),
                format_float(row.get("measured")),
                format_float(row.get("predicted")),
                row.get("error") or "",
            ]
        )
    return buffer.getvalue()


class ReportStorage(LoggerMixin):
    """Writes experiment outputs; every file lands atomically."""

    def write_report(self, report: HolonomyReport, path: Path) -> Path:
        atomic_write_text(path, report_json(report))
        self.log_debug("Report written", path=str(path))
        return Path(path)

    def write_trace(self, trace: LiftTrace, path: Path) -> Path:
        atomic_write_text(path, trace_csv(trace))
        self.log_debug("Trace written", path=str(path), rows=trace.steps + 1)
        return Path(path)

    def write_summary(self, rows: Sequence[Dict[str, Any]], path: Path) -> Path:
        atomic_write_text(path, summary_csv(rows))
        self.log_info("Summary written", path=str(path), rows=len(rows))
        return Path(path)

    def write_error(self, details: Dict[str, Any], path: Path) -> Path:
        atomic_write_text(path, json.dumps(details, indent=2, default=str) + "\n")
        return Path(path)

    @staticmethod
    def read_summary(path: Path) -> List[Dict[str, str]]:
        with Path(path).open(encoding="utf-8", newline="") as handle:
            return list(csv.DictReader(handle))
