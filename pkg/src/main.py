"""Command-line entry point."""
import json
import sys
from pathlib import Path
from typing import List, Optional

import typer
from rich.console import Console
from rich.table import Table

from src.core.config import settings
from src.core.exceptions import SpecValidationError
from src.middleware.error_handling import EXIT_OK, ErrorHandler
from src.models.experiment import ExperimentSpec
from src.models.holonomy import LiftMethod
from src.models.matrix import ComplexVector
from src.services.bundle_geometry import classify_plane, orthonormalize_plane
from src.services.experiment_runner import BatchSummary, ExperimentRunner, load_batch_dir
from src.services.storage import report_json


app = typer.Typer(
    name=settings.APP_NAME,
    help="Holonomy of horizontal lifts in Hopf-type bundles over CH¹ and C^n.",
    add_completion=False,
    no_args_is_help=True,
)
stderr_console = Console(stderr=True)


@app.callback()
def main() -> None:
    """Holonomy displacement experiments."""


@app.command()
def run(
    spec: Optional[Path] = typer.Argument(None, help="Experiment spec (JSON)."),
    steps: Optional[int] = typer.Option(None, "--steps", min=1, help="Override integrator.N."),
    method: Optional[LiftMethod] = typer.Option(None, "--method", help="Lift method."),
    trace: Optional[Path] = typer.Option(None, "--trace", help="Write the lift trace CSV here."),
    output: Optional[Path] = typer.Option(None, "--output", help="Write the report JSON here."),
    batch: Optional[Path] = typer.Option(None, "--batch", help="Run every spec in this directory."),
    workers: Optional[int] = typer.Option(None, "--workers", min=1, help="Batch worker processes."),
) -> None:
    """Run one experiment, or a directory of experiments with --batch."""
    handler = ErrorHandler()
    if batch is not None:
        code = handler.run(_run_batch, batch, steps, method, workers, trace is not None)
    elif spec is not None:
        code = handler.run(_run_single, spec, steps, method, trace, output)
    else:
        code = handler.handle(SpecValidationError("give a SPEC file or --batch DIR"))
    raise typer.Exit(code)


def _run_single(
    spec_path: Path,
    steps: Optional[int],
    method: Optional[LiftMethod],
    trace: Optional[Path],
    output: Optional[Path],
) -> int:
    spec = ExperimentSpec.from_file(spec_path)
    result = ExperimentRunner().run(
        spec, steps=steps, method=method, report_path=output, trace_path=trace
    )
    sys.stdout.write(report_json(result.report))
    result.raise_for_status()
    return EXIT_OK


def _run_batch(
    directory: Path,
    steps: Optional[int],
    method: Optional[LiftMethod],
    workers: Optional[int],
    write_traces: bool,
) -> int:
    if not directory.is_dir():
        raise SpecValidationError(f"batch directory {directory} does not exist", {"path": str(directory)})
    items = load_batch_dir(directory)
    summary = ExperimentRunner().batch(
        items, directory, steps=steps, method=method, workers=workers, write_traces=write_traces
    )
    _print_summary(summary)
    return summary.exit_code


def _print_summary(summary: BatchSummary) -> None:
    table = Table(title="Holonomy batch")
    table.add_column("spec_id")
    table.add_column("status")
    table.add_column("measured", justify="right")
    table.add_column("predicted", justify="right")
    table.add_column("residual", justify="right")
    for row in summary.rows:
        table.add_row(
            str(row["spec_id"]),
            str(row["status"]),
            _fmt(row.get("measured")),
            _fmt(row.get("predicted")),
            _fmt(row.get("residual")),
        )
    stderr_console.print(table)


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6g}"


def _parse_vector(text: str) -> ComplexVector:
    try:
        pairs: List[List[float]] = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecValidationError("vectors are JSON lists of [re, im] pairs", {"value": text}) from e
    return ComplexVector.from_pairs(pairs)


@app.command()
def classify(
    v: str = typer.Option(..., "--v", help='First vector, e.g. "[[1, 0]]".'),
    w: str = typer.Option(..., "--w", help='Second vector, e.g. "[[0, 1]]".'),
) -> None:
    """Classify span{v, w} as Complex, TotallyReal or NotTotallyGeodesic."""

    def _classify() -> int:
        plane = orthonormalize_plane(_parse_vector(v), _parse_vector(w))
        result = classify_plane(plane)
        document = {
            "classification": result.tag.value,
            "imaginary_pairing": result.imaginary_pairing,
            "span_residual": result.span_residual,
            "euler_coefficient": 4.0 * result.imaginary_pairing,
            "totally_geodesic": result.is_totally_geodesic,
        }
        sys.stdout.write(json.dumps(document, indent=2) + "\n")
        return EXIT_OK

    raise typer.Exit(ErrorHandler().run(_classify))


if __name__ == "__main__":
    app()
