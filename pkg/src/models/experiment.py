"""Experiment specification schema (JSON in, see ``experiment_runner``)."""
import json
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
from pydantic import Field, ValidationError as PydanticValidationError, model_validator

from src.core.config import settings
from src.core.exceptions import SpecValidationError
from src.models.base import FrozenModel
from src.models.curve import ChartCurve, CircleCurve, RectangleCurve
from src.models.holonomy import LiftMethod
from src.models.matrix import ComplexVector
from src.models.surface import BundleKind

ComplexPair = Tuple[float, float]


class SurfaceSpec(FrozenModel):
    """Spanning vectors as lists of [re, im] pairs."""

    v: List[ComplexPair] = Field(min_length=1)
    w: List[ComplexPair] = Field(min_length=1)

    def vectors(self) -> Tuple[ComplexVector, ComplexVector]:
        return ComplexVector.from_pairs(self.v), ComplexVector.from_pairs(self.w)


class IntegratorSpec(FrozenModel):
    N: int = Field(default_factory=lambda: settings.DEFAULT_STEPS, ge=1)
    method: LiftMethod = LiftMethod.BOTH


class OutputSpec(FrozenModel):
    report: Optional[str] = None
    trace: Optional[str] = None


class ExperimentSpec(FrozenModel):
    """One holonomy experiment."""

    id: str = Field(default="experiment", min_length=1)
    bundle: BundleKind
    n: int = Field(ge=1)
    surface: SurfaceSpec
    curve: ChartCurve
    integrator: IntegratorSpec = Field(default_factory=IntegratorSpec)
    outputs: OutputSpec = Field(default_factory=OutputSpec)

    @model_validator(mode="after")
    def check_consistency(self) -> "ExperimentSpec":
        if len(self.surface.v) != self.n or len(self.surface.w) != self.n:
            raise ValueError(
                f"surface vectors must have length n={self.n} "
                f"(got {len(self.surface.v)} and {len(self.surface.w)})"
            )
        if self.bundle is BundleKind.CPX_HYPERBOLIC and _min_chart_x(self.curve) < 0.0:
            raise ValueError("CpxHyperbolic chart curves need x >= 0 on every sample")
        return self

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        """Parse and validate, raising :class:`SpecValidationError` on any failure."""
        try:
            return cls.model_validate_json(text)
        except PydanticValidationError as e:
            raise SpecValidationError(
                "experiment spec failed validation",
                {"errors": json.loads(e.json(include_url=False))},
            ) from e

    @classmethod
    def from_file(cls, path: Path) -> "ExperimentSpec":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise SpecValidationError(f"cannot read spec file {path}", {"path": str(path)}) from e
        return cls.from_json(text)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


def _min_chart_x(curve: ChartCurve) -> float:
    """Smallest x coordinate the curve reaches."""
    if isinstance(curve, RectangleCurve):
        return curve.p
    if isinstance(curve, CircleCurve):
        return curve.center[0] - curve.radius
    points = curve.vertices if curve.kind == "Polygon" else curve.points
    return float(np.min(np.asarray(points, dtype=float)[:, 0]))
