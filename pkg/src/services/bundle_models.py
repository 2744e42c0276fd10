"""Total spaces over a chart, used by the connection-based lift.

A model maps a chart point P = (x, y) and a fiber coordinate z to a point
of the total space and measures the vertical part of tangent vectors with
the left-invariant metric. Nothing here knows the solved fiber equations:
``vertical_rate`` returns (a, b) with

    vertical part of d/dt total_point(P(t), z(t)) = a + b·z′

estimated by central differences, so the horizontal lift solves z′ = −a/b.
"""
import math
from abc import ABC, abstractmethod
from typing import Sequence, Tuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import ValidationError
from src.models.surface import BundleDescriptor, BundleKind, PlaneTag, SurfacePlane
from src.services.bundle_geometry import chart_point_array, project_su11_array
from src.services.groups import quaternion_product, quaternion_product_array, su11_from_chart_array

Coords = Tuple[float, ...]
ChartPoint = Sequence[float]


class BundleModel(ABC):
    """Principal bundle over a 2-D chart with a connection."""

    name: str = "bundle"

    def __init__(self, step: float | None = None):
        self.step = settings.FINITE_DIFFERENCE_STEP if step is None else step

    @abstractmethod
    def total_point(self, P: ChartPoint, z: float) -> Coords:
        """Point of the total space over P at fiber coordinate z."""

    @abstractmethod
    def vertical_component(self, point: Coords, tangent: Coords) -> float:
        """Inner product of a tangent vector with the unit vertical vector."""

    @abstractmethod
    def total_points(self, base: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`total_point` for (N, 2) base samples."""

    @abstractmethod
    def projection_residual(self, base: np.ndarray, lift_points: np.ndarray) -> float:
        """Largest distance between projected lift points and the base samples."""

    def vertical_rate(self, P: ChartPoint, V: ChartPoint, z: float) -> Tuple[float, float]:
        """(a, b): vertical parts of the section tangent and of ∂/∂z."""
        d = self.step
        x, y = P[0], P[1]
        vx, vy = V[0], V[1]
        here = self.total_point((x, y), z)

        forward = self.total_point((x + d * vx, y + d * vy), z)
        backward = self.total_point((x - d * vx, y - d * vy), z)
        section = tuple((f - b) / (2.0 * d) for f, b in zip(forward, backward))

        up = self.total_point((x, y), z + d)
        down = self.total_point((x, y), z - d)
        fiber = tuple((u - w) / (2.0 * d) for u, w in zip(up, down))

        return self.vertical_component(here, section), self.vertical_component(here, fiber)

    def horizontal_rate(self, P: ChartPoint, V: ChartPoint, z: float) -> float:
        a, b = self.vertical_rate(P, V, z)
        return -a / b

    @abstractmethod
    def vertical_components(self, points: np.ndarray, tangents: np.ndarray) -> np.ndarray:
        """Row-wise :meth:`vertical_component`."""

    def vertical_rates(
        self, base: np.ndarray, velocity: np.ndarray, z: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Vectorized :meth:`vertical_rate` over (N, 2) samples."""
        d = self.step
        here = self.total_points(base, z)
        section = (
            self.total_points(base + d * velocity, z) - self.total_points(base - d * velocity, z)
        ) / (2.0 * d)
        fiber = (self.total_points(base, z + d) - self.total_points(base, z - d)) / (2.0 * d)
        return self.vertical_components(here, section), self.vertical_components(here, fiber)

    def horizontal_rates(self, base: np.ndarray, velocity: np.ndarray, z: np.ndarray) -> np.ndarray:
        a, b = self.vertical_rates(base, velocity, z)
        return -a / b


class Su11HopfModel(BundleModel):
    """S¹ → SU(1,1) → CH¹ with total point T(x, σy)·ω(z).

    σ = −1 realizes a complex plane whose orientation is opposite to the
    complex structure; its chart is the reflection y → −y.
    """

    name = "su11_hopf"

    def __init__(self, sign: int = 1, step: float | None = None):
        super().__init__(step)
        if sign not in (1, -1):
            raise ValidationError("orientation sign must be ±1", {"sign": sign})
        self.sign = sign

    def total_point(self, P: ChartPoint, z: float) -> Coords:
        x, y = P[0], self.sign * P[1]
        sinh_x = math.sinh(x)
        section = (math.cosh(x), 0.0, sinh_x * math.cos(y), sinh_x * math.sin(y))
        return quaternion_product(section, (math.cos(z), -math.sin(z), 0.0, 0.0))

    def total_points(self, base: np.ndarray, z: np.ndarray) -> np.ndarray:
        section = su11_from_chart_array(base[:, 0], self.sign * base[:, 1])
        circle = np.stack([np.cos(z), -np.sin(z), np.zeros_like(z), np.zeros_like(z)], axis=1)
        return quaternion_product_array(section, circle)

    def vertical_component(self, point: Coords, tangent: Coords) -> float:
        """e3 coefficient of η⁻¹·X."""
        w1, w2, w3, w4 = point
        return quaternion_product((w1, -w2, -w3, -w4), tangent)[1]

    def vertical_components(self, points: np.ndarray, tangents: np.ndarray) -> np.ndarray:
        inverse = points * np.array([1.0, -1.0, -1.0, -1.0])
        return quaternion_product_array(inverse, tangents)[:, 1]

    def projection_residual(self, base: np.ndarray, lift_points: np.ndarray) -> float:
        projected = project_su11_array(lift_points)
        expected = chart_point_array(base[:, 0], self.sign * base[:, 1])
        scale = np.maximum(1.0, np.abs(expected[:, :1]))
        return float(np.max(np.abs(projected - expected) / scale))


class ProductModel(Su11HopfModel):
    """S¹ × CH¹ with the flat connection, in the same SU(1,1) coordinates.

    The fiber coordinate of T·ω(z) is atan2(−w2, w1); its differential is the
    connection form, so the horizontal lift keeps z constant.
    """

    name = "product"

    def __init__(self, step: float | None = None):
        super().__init__(1, step)

    def vertical_component(self, point: Coords, tangent: Coords) -> float:
        w1, w2 = point[0], point[1]
        return (w2 * tangent[0] - w1 * tangent[1]) / (w1 * w1 + w2 * w2)

    def vertical_components(self, points: np.ndarray, tangents: np.ndarray) -> np.ndarray:
        w1, w2 = points[:, 0], points[:, 1]
        return (w2 * tangents[:, 0] - w1 * tangents[:, 1]) / (w1 * w1 + w2 * w2)


class HeisenbergModel(BundleModel):
    """R → H^{2n+1} → C^n over the plane x·v + y·w."""

    name = "heisenberg"

    def __init__(self, plane: SurfacePlane, step: float | None = None):
        super().__init__(step)
        self.plane = plane
        self.v = tuple(float(c) for c in plane.v.as_real())
        self.w = tuple(float(c) for c in plane.w.as_real())

    def total_point(self, P: ChartPoint, z: float) -> Coords:
        x, y = P[0], P[1]
        return tuple(x * a + y * b for a, b in zip(self.v, self.w)) + (z,)

    def total_points(self, base: np.ndarray, z: np.ndarray) -> np.ndarray:
        planar = np.outer(base[:, 0], self.v) + np.outer(base[:, 1], self.w)
        return np.column_stack([planar, z])

    def vertical_component(self, point: Coords, tangent: Coords) -> float:
        """Central coefficient ds − 2 Im<ζ, dζ>."""
        twist = 0.0
        for k in range(0, len(point) - 1, 2):
            twist += point[k] * tangent[k + 1] - point[k + 1] * tangent[k]
        return tangent[-1] - 2.0 * twist

    def vertical_components(self, points: np.ndarray, tangents: np.ndarray) -> np.ndarray:
        twist = np.sum(
            points[:, 0:-1:2] * tangents[:, 1::2] - points[:, 1::2] * tangents[:, 0:-1:2], axis=1
        )
        return tangents[:, -1] - 2.0 * twist

    def projection_residual(self, base: np.ndarray, lift_points: np.ndarray) -> float:
        expected = np.outer(base[:, 0], self.v) + np.outer(base[:, 1], self.w)
        return float(np.max(np.abs(lift_points[:, :-1] - expected)))


def hyperbolic_model(coupling: float) -> BundleModel:
    """Model whose horizontal lift solves z′ = coupling·sinh²x·y′."""
    if coupling == 0.0:
        return ProductModel()
    if abs(coupling) == 1.0:
        return Su11HopfModel(int(coupling))
    raise ValidationError("hyperbolic coupling must be 1, -1 or 0", {"coupling": coupling})


def bundle_model(bundle: BundleDescriptor) -> BundleModel:
    if bundle.kind is BundleKind.HEISENBERG:
        return HeisenbergModel(bundle.surface)
    if bundle.classification.tag is PlaneTag.TOTALLY_REAL:
        return ProductModel()
    return Su11HopfModel(bundle.orientation)
