"""Closed chart curves: parametrization, sampling, areas and lengths.

Every curve is parametrized over t in [0, 1]. Piecewise-linear curves
(rectangles, polygons, sampled lists) spend t in equal slices per edge and
are integrated edge by edge, so corners always sit on sample points.
Line integrals use Simpson's rule per step, which is the RK4 update for a
right-hand side that does not depend on the unknown.
"""
import math
from dataclasses import dataclass
from typing import Callable, List, Literal, Optional, Tuple, Union

import numpy as np

from src.core.config import settings
from src.core.exceptions import CurveValidationError, ValidationError
from src.core.logging import get_logger
from src.models.curve import (
    ChartCurve,
    CircleCurve,
    CurveMetrics,
    CurveSamples,
    MetricKind,
    Orientation,
    PolygonCurve,
    RectangleCurve,
    SampledCurve,
)

logger = get_logger(__name__)

Rate = Callable[[np.ndarray, np.ndarray], np.ndarray]
_CHART_EDGE_SLACK = 1e-12


class PolygonPath:
    """Closed polygon through ``vertices`` (k x 2, closing edge implicit).

    ``sample_count`` is the length of the closed point list a Sampled curve
    came from; asking for that many steps keeps one step per sample.
    """

    def __init__(self, vertices: np.ndarray, sample_count: Optional[int] = None):
        self.vertices = np.asarray(vertices, dtype=np.float64)
        self.sample_count = sample_count
        self.closed = np.vstack([self.vertices, self.vertices[:1]])
        self.deltas = np.diff(self.closed, axis=0)

    @property
    def edges(self) -> int:
        return int(self.vertices.shape[0])

    def schedule(self, N: int) -> Tuple[int, np.ndarray]:
        """Total step count and the edge index of every step."""
        if N == self.sample_count:
            return self.edges, np.arange(self.edges)
        per_edge = max(1, math.ceil(N / self.edges))
        total = per_edge * self.edges
        return total, np.arange(total) // per_edge

    def evaluate(self, t: np.ndarray, edge: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        k = self.edges
        local = t * k - edge
        velocity = k * self.deltas[edge]
        return self.vertices[edge] + local[:, None] * self.deltas[edge], velocity


class CirclePath:
    """x = cx + r cos(±2πt), y = cy + r sin(±2πt)."""

    edges = 1

    def __init__(self, center: Tuple[float, float], radius: float, sign: int):
        self.center = np.asarray(center, dtype=np.float64)
        self.radius = float(radius)
        self.sign = sign

    def schedule(self, N: int) -> Tuple[int, np.ndarray]:
        if N < settings.MIN_CIRCLE_STEPS:
            raise CurveValidationError(
                f"circles need at least {settings.MIN_CIRCLE_STEPS} steps", {"N": N}
            )
        return N, np.zeros(N, dtype=int)

    def evaluate(self, t: np.ndarray, edge: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        theta = self.sign * 2.0 * math.pi * t
        cos, sin = np.cos(theta), np.sin(theta)
        points = self.center + self.radius * np.stack([cos, sin], axis=1)
        speed = self.radius * 2.0 * math.pi * self.sign
        return points, speed * np.stack([-sin, cos], axis=1)


CurvePath = Union[PolygonPath, CirclePath]


def curve_vertices(curve: ChartCurve) -> Optional[np.ndarray]:
    """Traversal-ordered vertices of a piecewise-linear curve, None for circles."""
    if isinstance(curve, CircleCurve):
        return None
    if isinstance(curve, RectangleCurve):
        p, a, q, b = curve.p, curve.a, curve.q, curve.b
        vertices = np.array([[p, q], [p + a, q], [p + a, q + b], [p, q + b]])
    elif isinstance(curve, PolygonCurve):
        vertices = np.asarray(curve.vertices, dtype=np.float64)
        if vertices.shape[0] > 3 and np.allclose(vertices[0], vertices[-1], rtol=0.0, atol=settings.CLOSURE_TOLERANCE):
            vertices = vertices[:-1]
    else:
        points = np.asarray(curve.points, dtype=np.float64)
        gap = float(np.max(np.abs(points[0] - points[-1])))
        if gap > settings.CLOSURE_TOLERANCE:
            raise CurveValidationError(
                "sampled curve is not closed", {"gap": gap, "tolerance": settings.CLOSURE_TOLERANCE}
            )
        vertices = points[:-1]
    if curve.orientation is Orientation.NEGATIVE:
        vertices = np.vstack([vertices[:1], vertices[:0:-1]])
    return vertices


def parametrization(curve: ChartCurve) -> CurvePath:
    if isinstance(curve, CircleCurve):
        return CirclePath(curve.center, curve.radius, curve.orientation.sign)
    if isinstance(curve, SampledCurve):
        return PolygonPath(curve_vertices(curve), sample_count=len(curve.points))
    return PolygonPath(curve_vertices(curve))


@dataclass(frozen=True, eq=False)
class StepGrid:
    """Per-step start, midpoint and end data of a sampled curve.

    Velocities are one-sided inside each step, so a corner between two edges
    never mixes their directions.
    """

    t: np.ndarray
    edge: np.ndarray
    path: CurvePath
    start: np.ndarray
    start_velocity: np.ndarray
    mid: np.ndarray
    mid_velocity: np.ndarray
    end: np.ndarray
    end_velocity: np.ndarray

    @property
    def steps(self) -> int:
        return int(self.edge.size)

    @property
    def h(self) -> float:
        return 1.0 / self.steps

    @property
    def nodes(self) -> np.ndarray:
        """The N+1 sample points."""
        return np.vstack([self.start, self.end[-1:]])

    @property
    def edge_starts(self) -> Tuple[int, ...]:
        changes = np.flatnonzero(np.diff(self.edge)) + 1
        return (0, *(int(i) for i in changes))

    def increments(self, rate: Rate) -> np.ndarray:
        """h/6 (f0 + 4 f_mid + f1) for every step."""
        return (self.h / 6.0) * (
            rate(self.start, self.start_velocity)
            + 4.0 * rate(self.mid, self.mid_velocity)
            + rate(self.end, self.end_velocity)
        )

    def cumulative(self, rate: Rate) -> np.ndarray:
        """Running integral at every node, starting from zero."""
        return np.concatenate([[0.0], np.cumsum(self.increments(rate))])

    def integral(self, rate: Rate) -> float:
        return float(np.sum(self.increments(rate)))

    def locate(self, step: int, fractions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Points and velocities at t_step + fraction·h inside one step."""
        fractions = np.asarray(fractions, dtype=np.float64)
        t = self.t[step] + fractions * self.h
        edge = np.full(fractions.shape, self.edge[step])
        return self.path.evaluate(t, edge)


def step_grid(curve: ChartCurve, N: int) -> StepGrid:
    if N < 1:
        raise CurveValidationError("step count must be positive", {"N": N})
    path = parametrization(curve)
    total, edge = path.schedule(N)
    t = np.arange(total + 1) / total
    start, start_velocity = path.evaluate(t[:-1], edge)
    mid, mid_velocity = path.evaluate(t[:-1] + 0.5 / total, edge)
    end, end_velocity = path.evaluate(t[1:], edge)
    return StepGrid(t, edge, path, start, start_velocity, mid, mid_velocity, end, end_velocity)


def sample(curve: ChartCurve, N: int) -> CurveSamples:
    """N+1 uniform samples, rounded up per edge for piecewise curves.

    A Sampled curve asked for as many steps as it has points comes back as is.
    """
    grid = step_grid(curve, N)
    points = grid.nodes
    gap = float(np.max(np.abs(points[0] - points[-1])))
    if gap > settings.CLOSURE_TOLERANCE * max(1.0, float(np.max(np.abs(points)))):
        raise CurveValidationError("curve samples do not close", {"gap": gap})
    return CurveSamples(t=grid.t, points=points, edge_starts=grid.edge_starts)


def min_chart_x(grid: StepGrid) -> float:
    return float(min(grid.start[:, 0].min(), grid.mid[:, 0].min(), grid.end[:, 0].min()))


def require_chart_domain(grid: StepGrid) -> None:
    """CpxHyperbolic chart curves must keep x >= 0."""
    lowest = min_chart_x(grid)
    if lowest < -_CHART_EDGE_SLACK:
        raise CurveValidationError(
            "chart curve reaches x < 0; the lift branch needs x >= 0", {"min_x": lowest}
        )


# Integrands


def hyperbolic_area_rate(points: np.ndarray, velocity: np.ndarray) -> np.ndarray:
    """2 sinh²x · y′, whose exterior derivative is the area element 2 sinh 2x dx dy."""
    sinh_x = np.sinh(points[:, 0])
    return 2.0 * sinh_x * sinh_x * velocity[:, 1]


def euclidean_area_rate(points: np.ndarray, velocity: np.ndarray) -> np.ndarray:
    return 0.5 * (points[:, 0] * velocity[:, 1] - points[:, 1] * velocity[:, 0])


def euclidean_speed(points: np.ndarray, velocity: np.ndarray) -> np.ndarray:
    return np.hypot(velocity[:, 0], velocity[:, 1])


def ch1_speed(points: np.ndarray, velocity: np.ndarray) -> np.ndarray:
    """Speed under the induced metric E = 4, F = 0, G = sinh² 2x."""
    return np.sqrt(4.0 * velocity[:, 0] ** 2 + np.sinh(2.0 * points[:, 0]) ** 2 * velocity[:, 1] ** 2)


# Areas and lengths


def hyperbolic_area(curve: ChartCurve, N: int) -> float:
    """Signed area ∮ 2 sinh²x dy in the CH¹ chart."""
    grid = step_grid(curve, N)
    require_chart_domain(grid)
    return grid.integral(hyperbolic_area_rate)


def euclidean_area(curve: ChartCurve, N: int) -> float:
    """Signed area ½∮(x dy − y dx)."""
    return step_grid(curve, N).integral(euclidean_area_rate)


def curve_length(curve: ChartCurve, N: int, metric_kind: MetricKind = MetricKind.EUCLIDEAN) -> float:
    grid = step_grid(curve, N)
    if metric_kind is MetricKind.CH1:
        require_chart_domain(grid)
        return grid.integral(ch1_speed)
    return grid.integral(euclidean_speed)


def curve_metrics(curve: ChartCurve, N: int, metric_kind: MetricKind) -> CurveMetrics:
    """Signed area and length measured with the same metric."""
    grid = step_grid(curve, N)
    if metric_kind is MetricKind.CH1:
        require_chart_domain(grid)
        return CurveMetrics(area=grid.integral(hyperbolic_area_rate), length=grid.integral(ch1_speed))
    return CurveMetrics(area=grid.integral(euclidean_area_rate), length=grid.integral(euclidean_speed))


# Curve constructions


def reverse(curve: ChartCurve) -> ChartCurve:
    """Same curve traversed the other way."""
    return curve.model_copy(update={"orientation": curve.orientation.flipped()})


def split_rectangle(
    rect: RectangleCurve, axis: Literal["x", "y"], at: float
) -> Tuple[RectangleCurve, RectangleCurve]:
    """Cut along x = at or y = at into two rectangles sharing that edge."""
    if axis == "x":
        if not rect.p <= at <= rect.p + rect.a:
            raise ValidationError("split coordinate outside the rectangle", {"axis": axis, "at": at})
        left = rect.model_copy(update={"a": at - rect.p})
        right = rect.model_copy(update={"p": at, "a": rect.p + rect.a - at})
        return left, right
    if axis == "y":
        if not rect.q <= at <= rect.q + rect.b:
            raise ValidationError("split coordinate outside the rectangle", {"axis": axis, "at": at})
        lower = rect.model_copy(update={"b": at - rect.q})
        upper = rect.model_copy(update={"q": at, "b": rect.q + rect.b - at})
        return lower, upper
    raise ValidationError("axis must be 'x' or 'y'", {"axis": axis})


def inscribed_polygon(circle: CircleCurve, k: int) -> PolygonCurve:
    """Regular k-gon with vertices on the circle, starting at angle 0."""
    if k < 3:
        raise ValidationError("an inscribed polygon needs at least 3 vertices", {"k": k})
    angles = 2.0 * math.pi * np.arange(k) / k
    cx, cy = circle.center
    vertices = [
        (cx + circle.radius * math.cos(a), cy + circle.radius * math.sin(a)) for a in angles
    ]
    return PolygonCurve(vertices=vertices, orientation=circle.orientation)


# Simplicity


def _orientation(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> float:
    return float((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


def _on_segment(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> bool:
    """r collinear with pq lies within its bounding box."""
    return (
        min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
        and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])
    )


def segments_intersect(p1: np.ndarray, p2: np.ndarray, p3: np.ndarray, p4: np.ndarray) -> bool:
    d1 = _orientation(p3, p4, p1)
    d2 = _orientation(p3, p4, p2)
    d3 = _orientation(p1, p2, p3)
    d4 = _orientation(p1, p2, p4)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True
    if d1 == 0 and _on_segment(p3, p4, p1):
        return True
    if d2 == 0 and _on_segment(p3, p4, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, p3):
        return True
    if d4 == 0 and _on_segment(p1, p2, p4):
        return True
    return False


def check_simple(vertices: np.ndarray) -> bool:
    """Exact O(k²) test that no two non-adjacent edges of the closed polygon meet."""
    vertices = np.asarray(vertices, dtype=np.float64)
    k = vertices.shape[0]
    if k < 3:
        return False
    closed = np.vstack([vertices, vertices[:1]])
    for i in range(k):
        for j in range(i + 1, k):
            adjacent = j == i + 1 or (i == 0 and j == k - 1)
            if adjacent:
                continue
            if segments_intersect(closed[i], closed[i + 1], closed[j], closed[j + 1]):
                return False
    # Adjacent edges may still fold back onto each other
    for i in range(k):
        prev_vertex, vertex, next_vertex = closed[i - 1], closed[i], closed[i + 1]
        if _orientation(prev_vertex, vertex, next_vertex) == 0 and np.dot(
            vertex - prev_vertex, next_vertex - vertex
        ) < 0:
            return False
    return True


def validate_curve(curve: ChartCurve) -> None:
    """Structural checks that do not depend on the bundle."""
    if isinstance(curve, PolygonCurve):
        vertices = curve_vertices(curve)
        if not check_simple(vertices):
            raise CurveValidationError(
                "polygon is not simple", {"vertices": np.asarray(curve.vertices).tolist()}
            )
    elif isinstance(curve, SampledCurve):
        curve_vertices(curve)


# Oracle


def grid_area(
    curve: ChartCurve,
    metric_kind: MetricKind = MetricKind.EUCLIDEAN,
    resolution: int = 4000,
    boundary_steps: int = 20000,
    chunk: int = 256,
) -> float:
    """Unsigned area of the enclosed region by column sums (even-odd rule).

    The boundary is replaced by its ``boundary_steps``-sample polygon; each
    of ``resolution`` vertical columns contributes the total length of its
    inside intervals weighted by the area element at the column center.
    """
    points = sample(curve, boundary_steps).points
    a, b = points[:-1], points[1:]
    x_min, x_max = float(points[:, 0].min()), float(points[:, 0].max())
    if x_max - x_min == 0.0:
        return 0.0
    dx = (x_max - x_min) / resolution
    centers = x_min + dx * (np.arange(resolution) + 0.5)

    lengths: List[np.ndarray] = []
    for begin in range(0, resolution, chunk):
        xs = centers[begin:begin + chunk, None]
        # half-open crossing rule keeps shared vertices from counting twice
        crosses = (a[None, :, 0] <= xs) != (b[None, :, 0] <= xs)
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = (xs - a[None, :, 0]) / (b[None, :, 0] - a[None, :, 0])
        ys = np.where(crosses, a[None, :, 1] + frac * (b[None, :, 1] - a[None, :, 1]), np.inf)
        ys = np.sort(ys, axis=1)
        counts = crosses.sum(axis=1)
        width = int(counts.max()) if counts.size else 0
        width -= width % 2
        block = np.zeros(xs.shape[0])
        for start in range(0, width, 2):
            lower, upper = ys[:, start], ys[:, start + 1]
            valid = np.isfinite(upper)
            block += np.where(valid, upper - lower, 0.0)
        lengths.append(block)

    column_lengths = np.concatenate(lengths)
    if metric_kind is MetricKind.CH1:
        weights = 2.0 * np.sinh(2.0 * np.abs(centers))
    else:
        weights = np.ones_like(centers)
    return float(np.sum(weights * column_lengths) * dx)
