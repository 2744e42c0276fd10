"""
Unit tests for holonomy_engine
Tests closed-form and generic lifts, holonomy reports and flat models
"""

import dataclasses
import math

import numpy as np
import pytest

from src.core.exceptions import CurveValidationError, DegenerateCurveError, IntegrationError
from src.models.curve import CircleCurve, PolygonCurve, RectangleCurve
from src.models.holonomy import LiftMethod, ReportStatus
from src.models.matrix import ComplexVector
from src.models.surface import BundleKind, SurfacePlane
from src.services import holonomy_engine
from src.services.bundle_geometry import descriptor
from src.services.curves_areas import hyperbolic_area, reverse, split_rectangle
from src.services.holonomy_engine import (
    flat_model,
    flat_model_from_metrics,
    holonomy,
    holonomy_angle,
    holonomy_with_trace,
    lift_generic,
    lift_heisenberg_closed_form,
    lift_su11_closed_form,
    reduce_angle,
)

SINH2_1 = math.sinh(1.0) ** 2


def unit_square(**overrides) -> RectangleCurve:
    values = {"p": 0.0, "a": 1.0, "q": 0.0, "b": 1.0}
    values.update(overrides)
    return RectangleCurve(**values)


def antiderivative(x: float) -> float:
    """∫ sinh²x dx."""
    return math.sinh(2.0 * x) / 4.0 - x / 2.0


@pytest.fixture
def hopf_bundle(complex_plane):
    return descriptor(BundleKind.CPX_HYPERBOLIC, 1, complex_plane)


@pytest.fixture
def heisenberg_bundle(complex_plane):
    return descriptor(BundleKind.HEISENBERG, 1, complex_plane)


class TestReduceAngle:
    """Test suite for the (−π, π] representative."""

    @pytest.mark.parametrize(
        "value,expected",
        [
            (0.0, 0.0),
            (math.pi, math.pi),
            (-math.pi, math.pi),
            (3.0 * math.pi, math.pi),
            (2.0 * math.pi + 0.25, 0.25),
            (-2.0 * math.pi - 0.25, -0.25),
        ],
    )
    def test_values(self, value, expected):
        assert reduce_angle(value) == pytest.approx(expected, abs=1e-12)

    def test_range(self, rng):
        for value in rng.uniform(-100.0, 100.0, 200):
            reduced = reduce_angle(float(value))
            assert -math.pi < reduced <= math.pi
            assert math.isclose(math.remainder(value - reduced, 2.0 * math.pi), 0.0, abs_tol=1e-9)

    def test_report_angle(self, hopf_bundle):
        rect = RectangleCurve(p=1.0, a=1.0, q=0.0, b=0.4)
        report = holonomy(hopf_bundle, rect, 400, LiftMethod.CLOSED_FORM)
        assert math.pi < report.measured < 3.0 * math.pi
        assert holonomy_angle(report) == pytest.approx(report.measured - 2.0 * math.pi, abs=1e-12)


class TestClosedFormLifts:
    """Test suite for the solved fiber equations."""

    def test_su11_unit_square(self):
        trace = lift_su11_closed_form(unit_square(), 400)
        assert trace.displacement == pytest.approx(SINH2_1, abs=1e-12)
        assert trace.method is LiftMethod.CLOSED_FORM
        assert trace.projection_residual < 1e-10
        assert trace.horizontality_residual < 1e-6

    def test_su11_trace_layout(self):
        trace = lift_su11_closed_form(unit_square(), 400)
        assert trace.steps == 400
        assert trace.lift_points.shape == (401, 4)
        assert trace.z[0] == 0.0
        rows = trace.rows()
        assert rows[0][:3] == (0.0, 0.0, 0.0)
        assert rows[-1][0] == pytest.approx(1.0)

    def test_su11_coupling(self):
        curve = unit_square()
        assert lift_su11_closed_form(curve, 100, coupling=-1.0).displacement == pytest.approx(-SINH2_1)
        assert lift_su11_closed_form(curve, 100, coupling=0.0).displacement == pytest.approx(0.0, abs=1e-15)

    def test_su11_slanted_edge(self):
        polygon = PolygonCurve(vertices=[(0.2, 0.0), (1.2, 0.0), (1.2, 1.0)])
        expected = math.sinh(1.2) ** 2 + antiderivative(0.2) - antiderivative(1.2)
        trace = lift_su11_closed_form(polygon, 3000)
        assert trace.displacement == pytest.approx(expected, abs=1e-10)

    def test_rk4_fourth_order(self):
        polygon = PolygonCurve(vertices=[(0.2, 0.0), (1.2, 0.0), (1.2, 1.0)])
        exact = math.sinh(1.2) ** 2 + antiderivative(0.2) - antiderivative(1.2)
        coarse = abs(lift_su11_closed_form(polygon, 24).displacement - exact)
        fine = abs(lift_su11_closed_form(polygon, 48).displacement - exact)
        assert 12.0 <= coarse / fine <= 20.0

    def test_su11_rejects_negative_x(self):
        with pytest.raises(CurveValidationError):
            lift_su11_closed_form(unit_square(p=-0.5), 100)

    def test_heisenberg_unit_square(self, complex_plane):
        trace = lift_heisenberg_closed_form(unit_square(), complex_plane, 400)
        assert trace.displacement == pytest.approx(4.0, abs=1e-12)
        assert trace.lift_points.shape == (401, 3)

    def test_heisenberg_unit_circle(self, complex_plane):
        circle = CircleCurve(center=(0.0, 0.0), radius=1.0)
        trace = lift_heisenberg_closed_form(circle, complex_plane, 256)
        assert trace.displacement == pytest.approx(4.0 * math.pi, abs=1e-10)

    def test_heisenberg_totally_real_is_closed(self, totally_real_plane):
        circle = CircleCurve(center=(0.3, -0.2), radius=2.0)
        trace = lift_heisenberg_closed_form(circle, totally_real_plane, 128)
        assert trace.displacement == pytest.approx(0.0, abs=1e-14)

    def test_heisenberg_negative_x_allowed(self, complex_plane):
        trace = lift_heisenberg_closed_form(unit_square(p=-3.0), complex_plane, 100)
        assert trace.displacement == pytest.approx(4.0, abs=1e-12)


class TestGenericLift:
    """Test suite for the connection-based lift."""

    def test_matches_closed_form_hopf(self, hopf_bundle):
        circle = CircleCurve(center=(1.0, 0.0), radius=0.5)
        generic = lift_generic(hopf_bundle, circle, 400)
        closed = lift_su11_closed_form(circle, 400)
        assert generic.method is LiftMethod.GENERIC
        assert generic.displacement == pytest.approx(closed.displacement, abs=1e-5)
        assert generic.projection_residual < 1e-8

    def test_matches_closed_form_heisenberg(self, heisenberg_bundle):
        generic = lift_generic(heisenberg_bundle, unit_square(), 200)
        assert generic.displacement == pytest.approx(4.0, abs=1e-7)

    def test_totally_real_is_flat(self, totally_real_plane):
        bundle = descriptor(BundleKind.CPX_HYPERBOLIC, 2, totally_real_plane)
        generic = lift_generic(bundle, unit_square(p=0.5), 200)
        assert generic.displacement == pytest.approx(0.0, abs=1e-8)

    def test_negative_complex_plane(self):
        plane = SurfacePlane(ComplexVector([1j]), ComplexVector([1.0]))
        bundle = descriptor(BundleKind.CPX_HYPERBOLIC, 1, plane)
        generic = lift_generic(bundle, unit_square(), 200)
        assert generic.displacement == pytest.approx(-SINH2_1, abs=1e-7)

    def test_step_halvings(self, hopf_bundle, override_settings):
        override_settings(HORIZONTALITY_ACCEPT=1e-9, MAX_STEP_HALVINGS=6)
        circle = CircleCurve(center=(1.0, 0.0), radius=0.5)
        generic = lift_generic(hopf_bundle, circle, 64)
        assert generic.step_halvings > 0
        assert generic.displacement == pytest.approx(hyperbolic_area(circle, 4096) / 2.0, abs=1e-6)

    def test_fine_grid_needs_no_halvings(self, hopf_bundle):
        generic = lift_generic(hopf_bundle, unit_square(), 10_000)
        assert generic.steps == 10_000
        assert generic.step_halvings == 0
        assert generic.displacement == pytest.approx(SINH2_1, abs=1e-8)

    def test_overflowing_chart_raises(self, hopf_bundle):
        with pytest.raises(IntegrationError) as exc_info:
            lift_generic(hopf_bundle, unit_square(p=800.0), 40)
        assert "not finite" in exc_info.value.message

    def test_failure_threshold(self, hopf_bundle, override_settings):
        override_settings(HORIZONTALITY_ACCEPT=1e-12, HORIZONTALITY_FAIL=1e-12, MAX_STEP_HALVINGS=0)
        circle = CircleCurve(center=(1.0, 0.0), radius=0.5)
        with pytest.raises(IntegrationError):
            lift_generic(hopf_bundle, circle, 16)


class TestHolonomyReports:
    """Test suite for measured against predicted holonomy."""

    def test_overflowing_rectangle_is_not_reported(self, hopf_bundle):
        with pytest.raises(IntegrationError):
            lift_su11_closed_form(unit_square(p=800.0), 40)
        with pytest.raises(IntegrationError):
            holonomy(hopf_bundle, unit_square(p=800.0), 40, LiftMethod.BOTH)

    def test_hopf_unit_square(self, hopf_bundle):
        report = holonomy(hopf_bundle, unit_square(), 400)
        assert report.kind is BundleKind.CPX_HYPERBOLIC
        assert report.measured == pytest.approx(SINH2_1, abs=1e-12)
        assert report.area == pytest.approx(2.0 * SINH2_1, abs=1e-12)
        assert report.predicted == pytest.approx(SINH2_1, abs=1e-12)
        assert report.residual < 1e-10
        assert report.measured_mod == pytest.approx(SINH2_1)
        assert report.classification == "Complex"
        assert report.lambda_or_e == 0.5
        assert report.status is ReportStatus.OK
        assert report.consistency_gap < 1e-6

    def test_heisenberg_unit_square(self, heisenberg_bundle):
        report = holonomy(heisenberg_bundle, unit_square(), 200)
        assert report.measured == pytest.approx(4.0, abs=1e-12)
        assert report.predicted == pytest.approx(4.0, abs=1e-12)
        assert report.length == pytest.approx(4.0)
        assert report.measured_mod is None
        assert report.lambda_or_e == pytest.approx(4.0)

    def test_closed_form_only(self, hopf_bundle):
        report = holonomy(hopf_bundle, unit_square(), 400, LiftMethod.CLOSED_FORM)
        assert report.generic_measured is None
        assert report.consistency_gap is None
        assert report.integrator.method is LiftMethod.CLOSED_FORM

    def test_generic_only(self, hopf_bundle):
        report, trace = holonomy_with_trace(hopf_bundle, unit_square(), 200, LiftMethod.GENERIC)
        assert trace.method is LiftMethod.GENERIC
        assert report.residual < 1e-6

    def test_integrator_info(self, hopf_bundle):
        report = holonomy(hopf_bundle, unit_square(), 10, LiftMethod.CLOSED_FORM)
        assert report.integrator.N == 10
        assert report.integrator.steps_used == 12

    def test_circle_needs_minimum_steps(self, hopf_bundle):
        circle = CircleCurve(center=(1.0, 0.0), radius=0.5)
        with pytest.raises(CurveValidationError):
            holonomy(hopf_bundle, circle, 4, LiftMethod.CLOSED_FORM)

    def test_default_steps(self, hopf_bundle, override_settings):
        override_settings(DEFAULT_STEPS=120)
        report = holonomy(hopf_bundle, unit_square(), method=LiftMethod.CLOSED_FORM)
        assert report.integrator.N == 120

    def test_orientation_reversal(self, hopf_bundle):
        curve = RectangleCurve(p=0.5, a=0.5, q=0.0, b=2.0)
        forward = holonomy(hopf_bundle, curve, 400, LiftMethod.CLOSED_FORM)
        backward = holonomy(hopf_bundle, reverse(curve), 400, LiftMethod.CLOSED_FORM)
        assert backward.measured == pytest.approx(-forward.measured, abs=1e-12)
        assert backward.area == pytest.approx(-forward.area, abs=1e-12)
        assert backward.metrics.area_sign == -1

    def test_additivity(self, hopf_bundle):
        whole = RectangleCurve(p=0.2, a=1.0, q=-0.5, b=1.5)
        left, right = split_rectangle(whole, "x", 0.7)
        total = holonomy(hopf_bundle, whole, 400, LiftMethod.CLOSED_FORM).measured
        parts = sum(holonomy(hopf_bundle, r, 400, LiftMethod.CLOSED_FORM).measured for r in (left, right))
        assert parts == pytest.approx(total, abs=1e-12)

    def test_totally_real_report(self, totally_real_plane):
        bundle = descriptor(BundleKind.CPX_HYPERBOLIC, 2, totally_real_plane)
        report = holonomy(bundle, unit_square(), 200)
        assert report.classification == "TotallyReal"
        assert report.measured == pytest.approx(0.0, abs=1e-12)
        assert report.predicted == 0.0
        assert report.area == pytest.approx(2.0 * SINH2_1)

    def test_inconsistent_methods(self, hopf_bundle, monkeypatch):
        real_generic = holonomy_engine.lift_generic

        def drifting_generic(bundle, curve, N):
            trace = real_generic(bundle, curve, N)
            return dataclasses.replace(trace, z=trace.z + np.linspace(0.0, 1e-3, trace.z.size))

        monkeypatch.setattr(holonomy_engine, "lift_generic", drifting_generic)
        report = holonomy(hopf_bundle, unit_square(), 100)
        assert report.status is ReportStatus.INCONSISTENT
        assert report.consistency_gap == pytest.approx(1e-3, rel=1e-3)

    def test_threshold_override(self, hopf_bundle, override_settings):
        override_settings(INCONSISTENCY_THRESHOLD=1.0)
        report = holonomy(hopf_bundle, unit_square(), 100)
        assert report.status is ReportStatus.OK

    def test_json_document(self, hopf_bundle):
        document = holonomy(hopf_bundle, unit_square(), 100).to_json_dict()
        assert document["kind"] == "CpxHyperbolic"
        assert document["status"] == "OK"
        assert document["integrator"] == {"N": 100, "method": "both", "steps_used": 100}
        assert document["abs_area"] == pytest.approx(2.0 * SINH2_1)


class TestFlatModels:
    """Test suite for the Hopf torus and Hopf cylinder."""

    def test_torus_generators(self):
        model = flat_model_from_metrics(BundleKind.CPX_HYPERBOLIC, 0.5, 2.0 * math.pi, 4.0 * math.pi)
        assert model.is_torus
        assert model.generators[0] == pytest.approx((2.0 * math.pi, 0.0))
        assert model.generators[1] == pytest.approx((math.pi, 2.0 * math.pi))
        assert model.covolume() == pytest.approx(4.0 * math.pi ** 2)

    def test_cylinder_translation(self, heisenberg_bundle):
        model = flat_model(heisenberg_bundle, unit_square(), 100)
        assert not model.is_torus
        assert model.translation == pytest.approx((4.0, 4.0))
        assert model.covolume() == 0.0

    def test_torus_from_curve(self, hopf_bundle):
        model = flat_model(hopf_bundle, unit_square(), 400)
        assert model.generators[1][0] == pytest.approx(SINH2_1, abs=1e-12)
        assert model.generators[1][1] == pytest.approx(model.length / 2.0)

    def test_degenerate_length(self):
        with pytest.raises(DegenerateCurveError):
            flat_model_from_metrics(BundleKind.HEISENBERG, 4.0, 0.0, 0.0)

    def test_degenerate_curve(self, heisenberg_bundle):
        with pytest.raises(DegenerateCurveError):
            flat_model(heisenberg_bundle, unit_square(a=0.0, b=0.0), 100)
