"""Value types for groups, planes, curves, reports and experiment specs."""

from .base import FrozenModel, frozen_array
from .matrix import ComplexVector, RealMatrix
from .group import CH1Point, HeisenbergAlgebra, HeisenbergElement, Su11Algebra, Su11Element
from .surface import BundleDescriptor, BundleKind, PlaneClass, PlaneTag, SurfacePlane
from .curve import (
    CircleCurve,
    CurveMetrics,
    CurveSamples,
    MetricKind,
    Orientation,
    PolygonCurve,
    RectangleCurve,
    SampledCurve,
)
from .holonomy import FlatModel, HolonomyReport, IntegratorInfo, LiftMethod, LiftTrace, ReportStatus
from .experiment import ExperimentSpec, IntegratorSpec, OutputSpec, SurfaceSpec

__all__ = [
    # Base
    "FrozenModel", "frozen_array",

    # Linear algebra
    "RealMatrix", "ComplexVector",

    # Groups and base space
    "Su11Element", "Su11Algebra",
    "HeisenbergElement", "HeisenbergAlgebra",
    "CH1Point",

    # Planes and bundles
    "BundleKind", "PlaneTag", "SurfacePlane", "PlaneClass", "BundleDescriptor",

    # Curves
    "Orientation", "MetricKind",
    "RectangleCurve", "CircleCurve", "PolygonCurve", "SampledCurve",
    "CurveMetrics", "CurveSamples",

    # Reports
    "LiftMethod", "ReportStatus", "LiftTrace", "IntegratorInfo", "HolonomyReport", "FlatModel",

    # Experiments
    "SurfaceSpec", "IntegratorSpec", "OutputSpec", "ExperimentSpec",
]
