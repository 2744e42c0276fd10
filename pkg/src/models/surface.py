"""Surface planes in C^n, their classification and bundle descriptors."""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from src.core.config import settings
from src.core.exceptions import DimensionMismatchError, NonOrthonormalPlaneError
from src.models.matrix import ComplexVector


class BundleKind(str, Enum):
    """The two bundle families."""

    CPX_HYPERBOLIC = "CpxHyperbolic"
    HEISENBERG = "Heisenberg"


class PlaneTag(str, Enum):
    """Totally geodesic trichotomy of real 2-planes in C^n."""

    COMPLEX = "Complex"
    TOTALLY_REAL = "TotallyReal"
    NOT_TOTALLY_GEODESIC = "NotTotallyGeodesic"


@dataclass(frozen=True, eq=False)
class SurfacePlane:
    """Real 2-plane span{v, w} in C^n with an orthonormal basis over R."""

    v: ComplexVector
    w: ComplexVector

    def __post_init__(self) -> None:
        if self.v.dimension != self.w.dimension:
            raise DimensionMismatchError(
                "plane vectors must have equal dimension",
                {"v": self.v.dimension, "w": self.w.dimension},
            )
        tol = settings.ORTHONORMAL_TOLERANCE
        norm_v = self.v.norm()
        norm_w = self.w.norm()
        real_pairing = float(np.vdot(self.v.components, self.w.components).real)
        if abs(norm_v - 1.0) > tol or abs(norm_w - 1.0) > tol or abs(real_pairing) > tol:
            raise NonOrthonormalPlaneError(
                "plane basis is not orthonormal over R",
                {"norm_v": norm_v, "norm_w": norm_w, "re_pairing": real_pairing},
            )

    @property
    def n(self) -> int:
        return self.v.dimension

    @property
    def pairing(self) -> complex:
        """Hermitian pairing <v, w> = sum conj(v_k) w_k."""
        return complex(np.vdot(self.v.components, self.w.components))

    @property
    def imaginary_pairing(self) -> float:
        return self.pairing.imag

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "v": self.v.to_pairs(), "w": self.w.to_pairs()}


@dataclass(frozen=True)
class PlaneClass:
    """Classification result; ``span_residual`` is the bracket-closure residual when it was computed."""

    tag: PlaneTag
    imaginary_pairing: float
    span_residual: Optional[float] = None

    @property
    def is_totally_geodesic(self) -> bool:
        return self.tag is not PlaneTag.NOT_TOTALLY_GEODESIC


@dataclass(frozen=True, eq=False)
class BundleDescriptor:
    """Bundle family, surface and holonomy-per-area coefficient.

    For CpxHyperbolic ``lambda_`` is 1/2 (complex) or 0 (totally real) and
    ``orientation`` is the sign of Im<v, w> for complex planes. For Heisenberg
    ``lambda_`` equals ``euler_coefficient`` = 4 Im<v, w>.
    """

    kind: BundleKind
    n: int
    surface: SurfacePlane
    classification: PlaneClass
    lambda_: float
    euler_coefficient: Optional[float] = None
    orientation: int = 1

    @property
    def coefficient(self) -> float:
        """Signed holonomy per unit signed area."""
        if self.kind is BundleKind.HEISENBERG:
            return float(self.euler_coefficient or 0.0)
        return self.orientation * self.lambda_

    @property
    def coupling(self) -> float:
        """Factor multiplying sinh²x·y′ in the reduced hyperbolic fiber equation."""
        return 2.0 * self.coefficient

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "surface": self.surface.to_dict(),
            "classification": self.classification.tag.value,
            "lambda": self.lambda_,
            "euler_coefficient": self.euler_coefficient,
            "orientation": self.orientation,
        }
