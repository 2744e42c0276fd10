"""Lift traces, holonomy reports and flat quotient models."""
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from src.models.base import FrozenModel
from src.models.curve import CurveMetrics
from src.models.surface import BundleKind


class LiftMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    GENERIC = "generic"
    BOTH = "both"


class ReportStatus(str, Enum):
    OK = "OK"
    INCONSISTENT = "INCONSISTENT"


@dataclass(frozen=True, eq=False)
class LiftTrace:
    """Discretized horizontal lift.

    ``lift_points`` has one row per sample: quaternion coordinates for the
    hyperbolic bundles, (x1, y1, ..., xn, yn, s) for Heisenberg.
    """

    t: np.ndarray
    base: np.ndarray
    z: np.ndarray
    lift_points: np.ndarray
    method: LiftMethod
    projection_residual: float
    horizontality_residual: float
    step_halvings: int = 0

    @property
    def displacement(self) -> float:
        return float(self.z[-1] - self.z[0])

    @property
    def steps(self) -> int:
        return int(self.t.size) - 1

    def rows(self) -> List[Tuple[float, float, float, float]]:
        """(t, x, y, z) rows for the CSV trace."""
        return [
            (float(t), float(p[0]), float(p[1]), float(z))
            for t, p, z in zip(self.t, self.base, self.z)
        ]


class IntegratorInfo(FrozenModel):
    N: int
    method: LiftMethod
    steps_used: int


class HolonomyReport(FrozenModel):
    """Measured against predicted holonomy for one closed curve."""

    kind: BundleKind
    measured: float
    measured_mod: Optional[float] = None
    predicted: float
    metrics: CurveMetrics
    residual: float
    classification: str
    lambda_or_e: float
    orientation: int = 1
    integrator: IntegratorInfo
    status: ReportStatus = ReportStatus.OK
    generic_measured: Optional[float] = None
    consistency_gap: Optional[float] = None
    horizontality_residual: float = 0.0
    projection_residual: float = 0.0

    @property
    def area(self) -> float:
        return self.metrics.area

    @property
    def length(self) -> float:
        return self.metrics.length

    def to_json_dict(self) -> dict:
        """Flat report document written by the CLI."""
        return {
            "kind": self.kind.value,
            "measured": self.measured,
            "measured_mod": self.measured_mod,
            "predicted": self.predicted,
            "area": self.metrics.area,
            "abs_area": self.metrics.abs_area,
            "length": self.metrics.length,
            "residual": self.residual,
            "classification": self.classification,
            "lambda_or_e": self.lambda_or_e,
            "orientation": self.orientation,
            "integrator": {
                "N": self.integrator.N,
                "method": self.integrator.method.value,
                "steps_used": self.integrator.steps_used,
            },
            "status": self.status.value,
            "generic_measured": self.generic_measured,
            "consistency_gap": self.consistency_gap,
            "horizontality_residual": self.horizontality_residual,
            "projection_residual": self.projection_residual,
        }


class FlatModel(FrozenModel):
    """Flat quotient of the bundle over a closed curve.

    Hopf torus: lattice generators in R². Hopf cylinder: one translation.
    """

    kind: BundleKind
    generators: List[Tuple[float, float]]
    area: float
    length: float

    @property
    def is_torus(self) -> bool:
        return self.kind is BundleKind.CPX_HYPERBOLIC

    @property
    def translation(self) -> Tuple[float, float]:
        return self.generators[-1]

    def covolume(self) -> float:
        """|det| of the lattice; zero means the generators are dependent."""
        if len(self.generators) < 2:
            return 0.0
        (a, b), (c, d) = self.generators[0], self.generators[1]
        return abs(a * d - b * c)
