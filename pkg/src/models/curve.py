"""Closed chart curves and their metrics."""
from dataclasses import dataclass
from enum import Enum
from typing import Annotated, List, Literal, Tuple, Union

import numpy as np
from pydantic import Field, field_validator

from src.models.base import FrozenModel

Point = Tuple[float, float]


class Orientation(str, Enum):
    """Traversal direction; Positive is counterclockwise in the (x, y) chart."""

    POSITIVE = "Positive"
    NEGATIVE = "Negative"

    @property
    def sign(self) -> int:
        return 1 if self is Orientation.POSITIVE else -1

    def flipped(self) -> "Orientation":
        return Orientation.NEGATIVE if self is Orientation.POSITIVE else Orientation.POSITIVE


class MetricKind(str, Enum):
    """Metric used for lengths: the plane itself or the CH¹ chart metric."""

    EUCLIDEAN = "Euclidean"
    CH1 = "CH1"


class RectangleCurve(FrozenModel):
    """Boundary of [p, p+a] × [q, q+b] traversed A(p,q) → B → C → D."""

    kind: Literal["Rectangle"] = "Rectangle"
    p: float
    a: float = Field(ge=0.0)
    q: float
    b: float = Field(ge=0.0)
    orientation: Orientation = Orientation.POSITIVE


class CircleCurve(FrozenModel):
    kind: Literal["Circle"] = "Circle"
    center: Point
    radius: float = Field(ge=0.0)
    orientation: Orientation = Orientation.POSITIVE


class PolygonCurve(FrozenModel):
    """Closed polygon through ``vertices``; the closing edge is implicit."""

    kind: Literal["Polygon"] = "Polygon"
    vertices: List[Point] = Field(min_length=3)
    orientation: Orientation = Orientation.POSITIVE


class SampledCurve(FrozenModel):
    """Closed list of samples; the last point must repeat the first."""

    kind: Literal["Sampled"] = "Sampled"
    points: List[Point] = Field(min_length=4)
    orientation: Orientation = Orientation.POSITIVE

    @field_validator("points")
    @classmethod
    def validate_finite(cls, v: List[Point]) -> List[Point]:
        if not np.all(np.isfinite(np.asarray(v, dtype=float))):
            raise ValueError("sample coordinates must be finite")
        return v


ChartCurve = Annotated[
    Union[RectangleCurve, CircleCurve, PolygonCurve, SampledCurve],
    Field(discriminator="kind"),
]


class CurveMetrics(FrozenModel):
    """Signed enclosed area and length of a closed curve."""

    area: float
    length: float

    @property
    def abs_area(self) -> float:
        return abs(self.area)

    @property
    def area_sign(self) -> int:
        return (self.area > 0) - (self.area < 0)


@dataclass(frozen=True, eq=False)
class CurveSamples:
    """Uniform samples of a closed curve.

    ``t`` holds N+1 parameter values in [0, 1], ``points`` the matching chart
    points (first and last coincide) and ``edge_starts`` the sample indices
    where piecewise-linear edges begin.
    """

    t: np.ndarray
    points: np.ndarray
    edge_starts: Tuple[int, ...]

    @property
    def steps(self) -> int:
        return int(self.t.size) - 1

    @property
    def x(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.points[:, 1]
