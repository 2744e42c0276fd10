"""Horizontal lifts, holonomy reports and flat quotient models.

Closed-form lifts integrate the solved fiber equations

    CpxHyperbolic:  z′ = c·sinh²x·y′     (c = 1, −1 or 0)
    Heisenberg:     z′ = 2(x y′ − x′ y)·Im<v, w>

with RK4 on the step grid. The generic lift only uses the connection
(see ``bundle_models``) and adapts its step until the lift is horizontal.
"""
import math
from typing import Dict, Optional, Tuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import DegenerateCurveError, IntegrationError
from src.core.logging import LoggedOperation, get_logger
from src.models.curve import ChartCurve, CurveMetrics, MetricKind
from src.models.holonomy import (
    FlatModel,
    HolonomyReport,
    IntegratorInfo,
    LiftMethod,
    LiftTrace,
    ReportStatus,
)
from src.models.surface import BundleDescriptor, BundleKind, SurfacePlane
from src.services.bundle_models import BundleModel, HeisenbergModel, bundle_model, hyperbolic_model
from src.services.curves_areas import (
    Rate,
    StepGrid,
    curve_metrics,
    require_chart_domain,
    step_grid,
    validate_curve,
)

logger = get_logger(__name__)


def rk4_path(grid: StepGrid, rate: Rate) -> np.ndarray:
    """RK4 for z′ = rate(P, P′) along the grid, z(0) = 0.

    The right-hand side does not involve z, so each step is
    h/6·(f0 + 4 f_mid + f1).
    """
    return grid.cumulative(rate)


def reduce_angle(z: float) -> float:
    """Representative of z modulo 2π in (−π, π]."""
    reduced = math.remainder(z, 2.0 * math.pi)
    if reduced <= -math.pi:
        reduced += 2.0 * math.pi
    return reduced


def holonomy_angle(report: HolonomyReport) -> float:
    """Measured displacement as a fiber angle in (−π, π]."""
    return reduce_angle(report.measured)


def hyperbolic_rate(coupling: float) -> Rate:
    def rate(points: np.ndarray, velocity: np.ndarray) -> np.ndarray:
        sinh_x = np.sinh(points[:, 0])
        return coupling * sinh_x * sinh_x * velocity[:, 1]

    return rate


def heisenberg_rate(imaginary_pairing: float) -> Rate:
    def rate(points: np.ndarray, velocity: np.ndarray) -> np.ndarray:
        cross = points[:, 0] * velocity[:, 1] - velocity[:, 0] * points[:, 1]
        return 2.0 * imaginary_pairing * cross

    return rate


def node_velocities(grid: StepGrid) -> np.ndarray:
    """Velocity at every node, one-sided from the step that starts there."""
    return np.vstack([grid.start_velocity, grid.end_velocity[-1:]])


def horizontality_residual(
    model: BundleModel, base: np.ndarray, velocity: np.ndarray, z: np.ndarray, z_rate: np.ndarray
) -> float:
    """max |a + b·z′| over the nodes, with (a, b) from the connection."""
    a, b = model.vertical_rates(base, velocity, z)
    return float(np.max(np.abs(a + b * z_rate)))


def _require_finite(values: np.ndarray, what: str, **details: object) -> None:
    if not np.all(np.isfinite(values)):
        raise IntegrationError(f"{what} is not finite", {"quantity": what, **details})


def _finish_trace(
    model: BundleModel,
    grid: StepGrid,
    z: np.ndarray,
    z_rate: np.ndarray,
    method: LiftMethod,
    horizontality: Optional[float] = None,
    step_halvings: int = 0,
) -> LiftTrace:
    _require_finite(z, "fiber coordinate", model=model.name, method=method.value)
    base = grid.nodes
    lift_points = model.total_points(base, z)
    projection = model.projection_residual(base, lift_points)
    if not projection <= settings.PROJECTION_TOLERANCE:
        raise IntegrationError(
            "lift points do not project onto the curve",
            {"projection_residual": projection, "model": model.name},
        )
    if horizontality is None:
        horizontality = horizontality_residual(model, base, node_velocities(grid), z, z_rate)
    return LiftTrace(
        t=grid.t,
        base=base,
        z=z,
        lift_points=lift_points,
        method=method,
        projection_residual=projection,
        horizontality_residual=horizontality,
        step_halvings=step_halvings,
    )


def lift_su11_closed_form(curve: ChartCurve, N: int, coupling: float = 1.0) -> LiftTrace:
    """Lift η = T(x, ±y)·ω(z) solving z′ = coupling·sinh²x·y′."""
    model = hyperbolic_model(coupling)
    validate_curve(curve)
    grid = step_grid(curve, N)
    require_chart_domain(grid)
    rate = hyperbolic_rate(coupling)
    with np.errstate(over="ignore", invalid="ignore"):
        z = rk4_path(grid, rate)
        z_rate = rate(grid.nodes, node_velocities(grid))
    return _finish_trace(model, grid, z, z_rate, LiftMethod.CLOSED_FORM)


def lift_heisenberg_closed_form(curve: ChartCurve, plane: SurfacePlane, N: int) -> LiftTrace:
    """Lift (x v + y w, z) solving z′ = 2(x y′ − x′ y)·Im<v, w>."""
    model = HeisenbergModel(plane)
    validate_curve(curve)
    grid = step_grid(curve, N)
    rate = heisenberg_rate(plane.imaginary_pairing)
    z = rk4_path(grid, rate)
    z_rate = rate(grid.nodes, node_velocities(grid))
    return _finish_trace(model, grid, z, z_rate, LiftMethod.CLOSED_FORM)


def _rk4_sweep(model: BundleModel, grid: StepGrid, z0: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """One RK4 step on every grid step at once, starting from the values ``z0``.

    Returns the increments and the midpoint horizontality residuals, measured
    with the Hermite derivative 1.5Δz/h − (k1 + k4)/4.
    """
    h = grid.h
    f = model.horizontal_rates
    k1 = f(grid.start, grid.start_velocity, z0)
    k2 = f(grid.mid, grid.mid_velocity, z0 + 0.5 * h * k1)
    k3 = f(grid.mid, grid.mid_velocity, z0 + 0.5 * h * k2)
    k4 = f(grid.end, grid.end_velocity, z0 + h * k3)
    increments = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    z_mid = z0 + 0.5 * increments + h * (k1 - k4) / 8.0
    dz_mid = 1.5 * increments / h - 0.25 * (k1 + k4)
    a, b = model.vertical_rates(grid.mid, grid.mid_velocity, z_mid)
    return increments, np.abs(a + b * dz_mid)


def _rk4_substeps(
    model: BundleModel, points: np.ndarray, velocities: np.ndarray, z0: float, h: float
) -> Tuple[float, float]:
    """Run len(points) // 2 RK4 substeps over stage data sampled at half steps.

    Returns the final z and the largest midpoint horizontality residual.
    """
    f = model.horizontal_rate
    substeps = (len(points) - 1) // 2
    z = z0
    worst = 0.0
    for j in range(substeps):
        P0, Pm, P1 = points[2 * j], points[2 * j + 1], points[2 * j + 2]
        V0, Vm, V1 = velocities[2 * j], velocities[2 * j + 1], velocities[2 * j + 2]
        k1 = f(P0, V0, z)
        k2 = f(Pm, Vm, z + 0.5 * h * k1)
        k3 = f(Pm, Vm, z + 0.5 * h * k2)
        k4 = f(P1, V1, z + h * k3)
        z_next = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        z_mid = 0.5 * (z + z_next) + h * (k1 - k4) / 8.0
        dz_mid = 1.5 * (z_next - z) / h - 0.25 * (k1 + k4)
        a, b = model.vertical_rate(Pm, Vm, z_mid)
        worst = max(worst, abs(a + b * dz_mid))
        z = z_next
    return z, worst


def _refine_step(
    model: BundleModel, grid: StepGrid, step: int, z_start: float, level: int
) -> Tuple[float, float, int]:
    """Redo one step with 2^level substeps, halving further while it is rejected.

    Returns the increment, its residual and the level finally used.
    """
    while True:
        substeps = 2 ** level
        fractions = np.arange(2 * substeps + 1) / (2 * substeps)
        points, velocities = grid.locate(step, fractions)
        z_end, residual = _rk4_substeps(
            model,
            [tuple(p) for p in points],
            [tuple(v) for v in velocities],
            z_start,
            grid.h / substeps,
        )
        if residual <= settings.HORIZONTALITY_ACCEPT or level >= settings.MAX_STEP_HALVINGS:
            return z_end - z_start, residual, level
        level += 1


def lift_generic(bundle: BundleDescriptor, curve: ChartCurve, N: int) -> LiftTrace:
    """Horizontal lift from the connection alone.

    Every sweep integrates all grid steps at once with RK4 on the model's
    horizontal rate, each step starting from the previous sweep's z. Sweeps
    repeat until the path stops changing. A step whose midpoint residual
    exceeds the acceptance threshold is redone with 2, 4, ... substeps, up
    to MAX_STEP_HALVINGS times.
    """
    model = bundle_model(bundle)
    validate_curve(curve)
    grid = step_grid(curve, N)
    if bundle.kind is BundleKind.CPX_HYPERBOLIC:
        require_chart_domain(grid)

    accept = settings.HORIZONTALITY_ACCEPT
    fail = settings.HORIZONTALITY_FAIL
    levels: Dict[int, int] = {}
    z = np.zeros(grid.steps + 1)
    residuals = np.zeros(grid.steps)

    for sweep in range(settings.MAX_LIFT_SWEEPS):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            increments, residuals = _rk4_sweep(model, grid, z[:-1])
        _require_finite(increments, "generic lift increment", model=model.name, sweep=sweep)
        _require_finite(residuals, "horizontality residual", model=model.name, sweep=sweep)

        if settings.MAX_STEP_HALVINGS > 0:
            rejected = set(np.flatnonzero(residuals > accept).tolist()) | set(levels)
            for i in sorted(rejected):
                increments[i], residuals[i], levels[i] = _refine_step(
                    model, grid, i, float(z[i]), levels.get(i, 1)
                )

        z_next = np.concatenate([[0.0], np.cumsum(increments)])
        change = float(np.max(np.abs(z_next - z)))
        z = z_next
        if sweep > 0 and change <= settings.LIFT_SWEEP_TOLERANCE * (1.0 + float(np.max(np.abs(z)))):
            break
    else:
        raise IntegrationError(
            "generic lift sweeps do not converge",
            {"sweeps": settings.MAX_LIFT_SWEEPS, "last_change": change, "model": model.name},
        )

    worst_step = int(np.argmax(residuals))
    worst = float(residuals[worst_step])
    if worst > fail:
        raise IntegrationError(
            "horizontal lift residual stays above the failure threshold",
            {"step": worst_step, "residual": worst, "threshold": fail, "model": model.name},
        )

    halvings = sum(levels.values())
    if halvings:
        logger.warning("generic_lift_step_halvings", halvings=halvings, steps=grid.steps)
    if worst > accept:
        logger.warning("generic_lift_residual_above_accept", residual=worst, accept=accept)

    return _finish_trace(model, grid, z, np.zeros_like(z), LiftMethod.GENERIC, worst, halvings)


def closed_form_lift(bundle: BundleDescriptor, curve: ChartCurve, N: int) -> LiftTrace:
    if bundle.kind is BundleKind.HEISENBERG:
        return lift_heisenberg_closed_form(curve, bundle.surface, N)
    return lift_su11_closed_form(curve, N, bundle.coupling)


def metric_kind(bundle: BundleDescriptor) -> MetricKind:
    return MetricKind.CH1 if bundle.kind is BundleKind.CPX_HYPERBOLIC else MetricKind.EUCLIDEAN


def holonomy_with_trace(
    bundle: BundleDescriptor,
    curve: ChartCurve,
    N: Optional[int] = None,
    method: LiftMethod = LiftMethod.BOTH,
) -> Tuple[HolonomyReport, LiftTrace]:
    """Measured and predicted holonomy plus the trace the measurement came from."""
    steps = settings.DEFAULT_STEPS if N is None else N
    with LoggedOperation(
        "holonomy", logger_name=__name__, kind=bundle.kind.value, N=steps, method=method.value
    ) as op:
        generic: Optional[LiftTrace] = None
        if method is LiftMethod.GENERIC:
            trace = lift_generic(bundle, curve, steps)
        else:
            trace = closed_form_lift(bundle, curve, steps)
            if method is LiftMethod.BOTH:
                generic = lift_generic(bundle, curve, steps)

        metrics = curve_metrics(curve, steps, metric_kind(bundle))
        measured = trace.displacement
        predicted = bundle.coefficient * metrics.area
        _require_finite(
            np.array([measured, predicted, metrics.area]),
            "holonomy measurement",
            measured=measured,
            area=metrics.area,
        )

        status = ReportStatus.OK
        generic_measured = None
        gap = None
        horizontality = trace.horizontality_residual
        if generic is not None:
            generic_measured = generic.displacement
            gap = abs(measured - generic_measured)
            horizontality = max(horizontality, generic.horizontality_residual)
            if gap > settings.INCONSISTENCY_THRESHOLD:
                status = ReportStatus.INCONSISTENT
                logger.warning(
                    "lift_methods_disagree",
                    closed_form=measured,
                    generic=generic_measured,
                    gap=gap,
                    threshold=settings.INCONSISTENCY_THRESHOLD,
                )

        report = HolonomyReport(
            kind=bundle.kind,
            measured=measured,
            measured_mod=reduce_angle(measured) if bundle.kind is BundleKind.CPX_HYPERBOLIC else None,
            predicted=predicted,
            metrics=metrics,
            residual=abs(measured - predicted),
            classification=bundle.classification.tag.value,
            lambda_or_e=bundle.lambda_,
            orientation=bundle.orientation,
            integrator=IntegratorInfo(N=steps, method=method, steps_used=trace.steps),
            status=status,
            generic_measured=generic_measured,
            consistency_gap=gap,
            horizontality_residual=horizontality,
            projection_residual=trace.projection_residual,
        )
        op.context.update(measured=measured, predicted=predicted, residual=report.residual)
    return report, trace


def holonomy(
    bundle: BundleDescriptor,
    curve: ChartCurve,
    N: Optional[int] = None,
    method: LiftMethod = LiftMethod.BOTH,
) -> HolonomyReport:
    return holonomy_with_trace(bundle, curve, N, method)[0]


def flat_model_from_metrics(
    kind: BundleKind, coefficient: float, area: float, length: float
) -> FlatModel:
    """Hopf torus lattice {(2π, 0), (c·A, L/2)} or Hopf cylinder translation (e·A, L)."""
    if length <= 0.0:
        raise DegenerateCurveError("flat model needs a curve of positive length", {"length": length})
    if kind is BundleKind.CPX_HYPERBOLIC:
        generators = [(2.0 * math.pi, 0.0), (coefficient * area, 0.5 * length)]
    else:
        generators = [(coefficient * area, length)]
    return FlatModel(kind=kind, generators=generators, area=area, length=length)


def flat_model(bundle: BundleDescriptor, curve: ChartCurve, N: Optional[int] = None) -> FlatModel:
    steps = settings.DEFAULT_STEPS if N is None else N
    validate_curve(curve)
    metrics: CurveMetrics = curve_metrics(curve, steps, metric_kind(bundle))
    if metrics.length <= 0.0:
        raise DegenerateCurveError(
            "flat model needs a curve of positive length", {"length": metrics.length}
        )
    model = flat_model_from_metrics(bundle.kind, bundle.coefficient, metrics.area, metrics.length)
    logger.debug("flat_model", kind=bundle.kind.value, generators=model.generators)
    return model

