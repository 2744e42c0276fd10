"""Hopf projection onto CH¹ and classification of 2-planes in C^n.

A real plane span{v, w} in C^n is totally geodesic in CH^n exactly when it
is a complex line (|Im<v, w>| = 1) or totally real (Im<v, w> = 0). The
closed-form triple bracket [[v, w], v] gives an independent span test.
"""
import math
from typing import Tuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import (
    ClassificationRejectedError,
    DegeneratePlaneError,
    DimensionMismatchError,
)
from src.core.logging import get_logger
from src.models.group import CH1Point, Su11Element
from src.models.matrix import ComplexVector, RealMatrix
from src.models.surface import BundleDescriptor, BundleKind, PlaneClass, PlaneTag, SurfacePlane
from src.services.groups import i_conjugate, quaternion_matrix, quaternion_product, su11_matrix
from src.services.matrix_core import commutator, embed_complex, hermitian_inner, mat_chain

logger = get_logger(__name__)


# Projection


def project_su11(w: Su11Element) -> CH1Point:
    """p(w) = w·w̃ read off as (X, Y, Z)."""
    w1, w2, w3, w4 = w.coords
    return CH1Point(
        w1 * w1 + w2 * w2 + w3 * w3 + w4 * w4,
        2.0 * (w1 * w3 - w2 * w4),
        2.0 * (w1 * w4 + w2 * w3),
    )


def project_su11_array(W: np.ndarray) -> np.ndarray:
    """Row-wise projection of an (N, 4) coordinate array to (N, 3)."""
    w1, w2, w3, w4 = W[:, 0], W[:, 1], W[:, 2], W[:, 3]
    return np.stack(
        [
            w1 * w1 + w2 * w2 + w3 * w3 + w4 * w4,
            2.0 * (w1 * w3 - w2 * w4),
            2.0 * (w1 * w4 + w2 * w3),
        ],
        axis=1,
    )


def chart_point(x: float, y: float) -> CH1Point:
    """r(x, y) = (cosh 2x, sinh 2x cos y, sinh 2x sin y)."""
    sinh_2x = math.sinh(2.0 * x)
    return CH1Point(math.cosh(2.0 * x), sinh_2x * math.cos(y), sinh_2x * math.sin(y))


def chart_point_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    sinh_2x = np.sinh(2.0 * x)
    return np.stack([np.cosh(2.0 * x), sinh_2x * np.cos(y), sinh_2x * np.sin(y)], axis=1)


def ch1_point_matrix(point: CH1Point) -> RealMatrix:
    """4x4 realization [[X, 0, Y, Z], [0, X, −Z, Y], [Y, −Z, X, 0], [Z, Y, 0, X]]."""
    return RealMatrix(quaternion_matrix(point.X, 0.0, point.Y, point.Z))


def projection_matrix(w: Su11Element) -> RealMatrix:
    """w·w̃ as a matrix product of realizations."""
    return mat_chain(su11_matrix(w), su11_matrix(i_conjugate(w)))


def equivariance_check(w: Su11Element, v: Su11Element) -> float:
    """max |p(wv) − w·p(v)·w̃| over the 4x4 entries."""
    wv = Su11Element(*quaternion_product(w.coords, v.coords))
    lhs = ch1_point_matrix(project_su11(wv))
    rhs = mat_chain(su11_matrix(w), ch1_point_matrix(project_su11(v)), su11_matrix(i_conjugate(w)))
    return (lhs - rhs).max_abs()


# Planes


def triple_bracket(v: ComplexVector, w: ComplexVector) -> ComplexVector:
    """[[v, w], v] = Re<v, w> v − |v|² w − 3 Im<v, w> (i v)."""
    pairing = hermitian_inner(v, w)
    components = (
        pairing.real * v.components
        - float(np.vdot(v.components, v.components).real) * w.components
        - 3.0j * pairing.imag * v.components
    )
    return ComplexVector(components)


def m_block(xi: ComplexVector) -> np.ndarray:
    """Complex (n+1)-square matrix [[0, ξ*], [ξ, 0]] of u(1, n)."""
    n = xi.dimension
    block = np.zeros((n + 1, n + 1), dtype=np.complex128)
    block[1:, 0] = xi.components
    block[0, 1:] = np.conj(xi.components)
    return block


def triple_bracket_matrix(v: ComplexVector, w: ComplexVector) -> Tuple[ComplexVector, float]:
    """[[v, w], v] through commutators of embedded u(1, n) matrices.

    Returns the ξ-part of the result and how far the result is from the
    block form of an element of m.
    """
    if v.dimension != w.dimension:
        raise DimensionMismatchError(
            "vectors must have equal dimension", {"v": v.dimension, "w": w.dimension}
        )
    V = embed_complex(m_block(v))
    W = embed_complex(m_block(w))
    result = commutator(commutator(V, W), V).entries
    xi = ComplexVector(result[2::2, 0] + 1j * result[3::2, 0])
    residual = float(np.max(np.abs(result - embed_complex(m_block(xi)).entries)))
    return xi, residual


def orthonormalize_plane(v: ComplexVector, w: ComplexVector) -> SurfacePlane:
    """Real Gram–Schmidt on C^n ≅ R^{2n}."""
    if v.dimension != w.dimension:
        raise DimensionMismatchError(
            "plane vectors must have equal dimension", {"v": v.dimension, "w": w.dimension}
        )
    tol = settings.DEPENDENCE_TOLERANCE
    a = v.as_real()
    b = w.as_real()
    norm_a = float(np.linalg.norm(a))
    if norm_a < tol:
        raise DegeneratePlaneError("first spanning vector is zero", {"norm": norm_a})
    a = a / norm_a
    b = b - float(np.dot(a, b)) * a
    norm_b = float(np.linalg.norm(b))
    if norm_b < tol:
        raise DegeneratePlaneError(
            "spanning vectors are linearly dependent over R", {"residual_norm": norm_b}
        )
    return SurfacePlane(ComplexVector.from_real(a), ComplexVector.from_real(b / norm_b))


def _span_residual(plane: SurfacePlane, vector: ComplexVector) -> float:
    """Distance from ``vector`` to span_R{v, w}."""
    basis = (plane.v.as_real(), plane.w.as_real())
    target = vector.as_real()
    remainder = target - sum(float(np.dot(e, target)) * e for e in basis)
    return float(np.linalg.norm(remainder))


def bracket_closure_residual(plane: SurfacePlane) -> float:
    """Largest distance of [[v, w], v] and [[w, v], w] from the plane."""
    return max(
        _span_residual(plane, triple_bracket(plane.v, plane.w)),
        _span_residual(plane, triple_bracket(plane.w, plane.v)),
    )


def bracket_closure_test(plane: SurfacePlane) -> Tuple[bool, float]:
    residual = bracket_closure_residual(plane)
    return residual <= settings.SPAN_RESIDUAL_TOLERANCE, residual


def complex_line_distance(plane: SurfacePlane) -> float:
    """‖w ∓ i·v‖ for the sign of Im<v, w>; linear in the tilt away from a complex line."""
    sign = 1.0 if plane.imaginary_pairing >= 0.0 else -1.0
    return (plane.w - plane.v.scaled(sign * 1j)).norm()


def classify_plane(plane: SurfacePlane) -> PlaneClass:
    """Complex, TotallyReal or NotTotallyGeodesic.

    Near-exact cases decide directly; otherwise the bracket-closure test
    runs, and a plane that passes it is assigned the nearer exact case.
    """
    basis = orthonormalize_plane(plane.v, plane.w)
    s = basis.imaginary_pairing
    tol = settings.CLASSIFICATION_TOLERANCE
    if abs(s) < tol:
        return PlaneClass(PlaneTag.TOTALLY_REAL, s)
    if complex_line_distance(basis) < tol:
        return PlaneClass(PlaneTag.COMPLEX, s)

    closed, residual = bracket_closure_test(basis)
    if not closed:
        return PlaneClass(PlaneTag.NOT_TOTALLY_GEODESIC, s, residual)
    tag = PlaneTag.TOTALLY_REAL if abs(s) < 0.5 else PlaneTag.COMPLEX
    logger.warning(
        "borderline_classification", imaginary_pairing=s, span_residual=residual, tag=tag.value
    )
    return PlaneClass(tag, s, residual)


def classify_vectors(v: ComplexVector, w: ComplexVector) -> PlaneClass:
    return classify_plane(orthonormalize_plane(v, w))


def euler_coefficient(plane: SurfacePlane) -> float:
    """e = 4 Im<v, w>; independent of the orthonormal basis up to orientation."""
    return 4.0 * plane.imaginary_pairing


def descriptor(kind: BundleKind, n: int, plane: SurfacePlane) -> BundleDescriptor:
    """Bundle descriptor with its holonomy-per-area coefficient."""
    if plane.n != n:
        raise DimensionMismatchError("plane dimension differs from n", {"n": n, "plane_n": plane.n})

    classification = classify_plane(plane)

    if kind is BundleKind.HEISENBERG:
        e = euler_coefficient(plane)
        result = BundleDescriptor(
            kind=kind,
            n=n,
            surface=plane,
            classification=classification,
            lambda_=e,
            euler_coefficient=e,
        )
        logger.debug("bundle_descriptor", kind=kind.value, n=n, euler_coefficient=e)
        return result

    if classification.tag is PlaneTag.NOT_TOTALLY_GEODESIC:
        logger.error(
            "classification_rejected",
            imaginary_pairing=classification.imaginary_pairing,
            span_residual=classification.span_residual,
        )
        raise ClassificationRejectedError(
            "plane is neither a complex line (|Im<v,w>| = 1) nor totally real "
            "(Im<v,w> = 0), so it spans no totally geodesic surface of CH^n",
            {
                "classification": classification.tag.value,
                "imaginary_pairing": classification.imaginary_pairing,
                "span_residual": classification.span_residual,
                "criterion": "[[v,w],v] must lie in span{v,w}",
            },
        )

    if classification.tag is PlaneTag.COMPLEX:
        lambda_, orientation = 0.5, (1 if classification.imaginary_pairing > 0 else -1)
    else:
        lambda_, orientation = 0.0, 1

    logger.debug(
        "bundle_descriptor",
        kind=kind.value,
        n=n,
        classification=classification.tag.value,
        lambda_=lambda_,
        orientation=orientation,
    )
    return BundleDescriptor(
        kind=kind,
        n=n,
        surface=plane,
        classification=classification,
        lambda_=lambda_,
        orientation=orientation,
    )
