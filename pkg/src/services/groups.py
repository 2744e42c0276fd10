"""SU(1,1) and the complex Heisenberg group H^{2n+1}.

SU(1,1) elements are stored as quaternion coordinates (w1, w2, w3, w4) and
realized on demand as the real 4x4 matrix

    [[ w1,  w2,  w3,  w4],
     [-w2,  w1, -w4,  w3],
     [ w3, -w4,  w1, -w2],
     [ w4,  w3,  w2,  w1]]

with orthonormal algebra basis e1 = j, e2 = k, e3 = i (e3 spans the fiber).
Heisenberg elements (s, z) multiply as (s + t + 2 Im<z, z'>, z + z').
"""
import math
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.config import settings
from src.core.exceptions import (
    BracketClosureError,
    ConstraintViolationError,
    DimensionMismatchError,
    TangentMismatchError,
    ValidationError,
)
from src.core.logging import get_logger
from src.models.group import HeisenbergAlgebra, HeisenbergElement, Su11Algebra, Su11Element
from src.models.matrix import ComplexVector, RealMatrix
from src.services.matrix_core import commutator, expand_in_basis, mat_exp

logger = get_logger(__name__)

Quaternion = Tuple[float, float, float, float]
GroupElement = Union[Su11Element, HeisenbergElement]
AlgebraElement = Union[Su11Algebra, HeisenbergAlgebra]


# SU(1,1)


def quaternion_matrix(w1: float, w2: float, w3: float, w4: float) -> np.ndarray:
    return np.array(
        [
            [w1, w2, w3, w4],
            [-w2, w1, -w4, w3],
            [w3, -w4, w1, -w2],
            [w4, w3, w2, w1],
        ]
    )


SU11_BASIS: Tuple[RealMatrix, RealMatrix, RealMatrix] = (
    RealMatrix(quaternion_matrix(0.0, 0.0, 1.0, 0.0)),
    RealMatrix(quaternion_matrix(0.0, 0.0, 0.0, 1.0)),
    RealMatrix(quaternion_matrix(0.0, 1.0, 0.0, 0.0)),
)


def quaternion_product(a: Sequence[float], b: Sequence[float]) -> Quaternion:
    """Product in split-quaternion coordinates; matches the 4x4 matrix product."""
    a1, a2, a3, a4 = a
    b1, b2, b3, b4 = b
    return (
        a1 * b1 - a2 * b2 + a3 * b3 + a4 * b4,
        a1 * b2 + a2 * b1 - a3 * b4 + a4 * b3,
        a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
        a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
    )


def quaternion_product_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise :func:`quaternion_product` on (..., 4) arrays."""
    a1, a2, a3, a4 = (a[..., k] for k in range(4))
    b1, b2, b3, b4 = (b[..., k] for k in range(4))
    return np.stack(
        [
            a1 * b1 - a2 * b2 + a3 * b3 + a4 * b4,
            a1 * b2 + a2 * b1 - a3 * b4 + a4 * b3,
            a1 * b3 - a2 * b4 + a3 * b1 + a4 * b2,
            a1 * b4 + a2 * b3 - a3 * b2 + a4 * b1,
        ],
        axis=-1,
    )


def check_su11(w: Su11Element, tolerance: Optional[float] = None) -> None:
    """Raise :class:`ConstraintViolationError` when w is off the unit quadric."""
    tol = settings.CONSTRAINT_TOLERANCE if tolerance is None else tolerance
    deviation = abs(w.form - 1.0)
    if deviation > tol:
        raise ConstraintViolationError(
            "element violates w1² + w2² − w3² − w4² = 1",
            {"coords": list(w.coords), "deviation": deviation},
        )


def su11_matrix(w: Su11Element) -> RealMatrix:
    """4x4 real realization."""
    return RealMatrix(quaternion_matrix(*w.coords))


def su11_from_matrix(M: RealMatrix) -> Su11Element:
    """Read quaternion coordinates off the first row; the pattern is checked."""
    if M.shape != (4, 4):
        raise DimensionMismatchError("SU(1,1) matrices are 4x4", {"shape": list(M.shape)})
    w = Su11Element.from_coords(M.entries[0])
    residual = float(np.max(np.abs(quaternion_matrix(*w.coords) - M.entries)))
    if residual > settings.CONSTRAINT_TOLERANCE:
        raise ValidationError(
            "matrix does not follow the quaternion pattern", {"residual": residual}
        )
    return w


def su11_mul(a: Su11Element, b: Su11Element, check: bool = True) -> Su11Element:
    if check:
        check_su11(a)
        check_su11(b)
    return Su11Element(*quaternion_product(a.coords, b.coords))


def su11_inverse(w: Su11Element) -> Su11Element:
    """Inverse of a unit element."""
    check_su11(w)
    return Su11Element(w.w1, -w.w2, -w.w3, -w.w4)


def i_conjugate(w: Su11Element) -> Su11Element:
    """w̃: replace w2 by −w2."""
    return Su11Element(w.w1, -w.w2, w.w3, w.w4)


def su11_circle(z: float) -> Su11Element:
    """Fiber rotation ω(z) = exp(−z e3)."""
    return Su11Element(math.cos(z), -math.sin(z), 0.0, 0.0)


def su11_from_chart(x: float, y: float) -> Su11Element:
    """Element of T over chart point (x, y); its projection is r(x, y)."""
    sinh_x = math.sinh(x)
    return Su11Element(math.cosh(x), 0.0, sinh_x * math.cos(y), sinh_x * math.sin(y))


def su11_from_chart_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    sinh_x = np.sinh(x)
    return np.stack([np.cosh(x), np.zeros_like(x), sinh_x * np.cos(y), sinh_x * np.sin(y)], axis=-1)


def renormalize(w: Su11Element) -> Su11Element:
    """Divide by √|form| to pull a drifted product back onto the group."""
    form = abs(w.form)
    if form == 0.0:
        raise ConstraintViolationError("cannot renormalize a null vector", {"coords": list(w.coords)})
    scale = 1.0 / math.sqrt(form)
    return Su11Element(w.w1 * scale, w.w2 * scale, w.w3 * scale, w.w4 * scale)


def su11_product(
    elements: Iterable[Su11Element], renormalize_every: Optional[int] = None
) -> Su11Element:
    """Left-to-right product of a chain.

    Every ``renormalize_every`` products the running value is renormalized;
    zero disables it.
    """
    every = settings.RENORMALIZE_EVERY if renormalize_every is None else renormalize_every
    result: Quaternion = Su11Element.identity().coords
    count = 0
    renormalizations = 0
    for element in elements:
        result = quaternion_product(result, element.coords)
        count += 1
        if every and count % every == 0:
            result = renormalize(Su11Element(*result)).coords
            renormalizations += 1
    logger.debug("su11_product", factors=count, renormalizations=renormalizations)
    return Su11Element(*result)


def su11_algebra_matrix(a: Su11Algebra) -> RealMatrix:
    return RealMatrix(quaternion_matrix(0.0, a.c3, a.c1, a.c2))


def su11_exp(a: Su11Algebra) -> Su11Element:
    return su11_from_matrix(mat_exp(su11_algebra_matrix(a)))


def su11_bracket(a: Su11Algebra, b: Su11Algebra) -> Su11Algebra:
    """Matrix commutator expanded back into (e1, e2, e3)."""
    bracket = commutator(su11_algebra_matrix(a), su11_algebra_matrix(b))
    coefficients, residual = expand_in_basis(bracket, SU11_BASIS)
    if residual > settings.BRACKET_RESIDUAL_TOLERANCE:
        raise BracketClosureError(
            "su(1,1) bracket left the algebra", {"residual": residual}
        )
    return Su11Algebra(*(float(c) for c in coefficients))


# Heisenberg


def _check_same_n(g: HeisenbergElement, h: HeisenbergElement) -> None:
    if g.n != h.n:
        raise DimensionMismatchError("Heisenberg dimensions differ", {"left": g.n, "right": h.n})


def heis_mul(g: HeisenbergElement, h: HeisenbergElement) -> HeisenbergElement:
    _check_same_n(g, h)
    twist = 2.0 * complex(np.vdot(g.z.components, h.z.components)).imag
    return HeisenbergElement(g.s + h.s + twist, g.z + h.z)


def heis_inverse(g: HeisenbergElement) -> HeisenbergElement:
    return HeisenbergElement(-g.s, g.z.scaled(-1.0))


def heis_affine_rep(g: HeisenbergElement) -> RealMatrix:
    """(2n+2)-square affine matrix.

    Row 0 is (1, −2y1, 2x1, ..., −2yn, 2xn, s); the last column is
    (s, x1, y1, ..., xn, yn, 1).
    """
    n = g.n
    size = 2 * n + 2
    rep = np.eye(size)
    planar = g.z.as_real()
    rep[0, 1:size - 1:2] = -2.0 * planar[1::2]
    rep[0, 2:size - 1:2] = 2.0 * planar[0::2]
    rep[0, -1] = g.s
    rep[1:size - 1, -1] = planar
    return RealMatrix(rep)


def heis_basis(n: int) -> List[RealMatrix]:
    """Orthonormal basis e1, ..., e_{2n+1} as (2n+2)-square matrices."""
    if n < 1:
        raise DimensionMismatchError("Heisenberg dimension must be positive", {"n": n})
    size = 2 * n + 2
    basis = []
    for k in range(n):
        e_x = np.zeros((size, size))
        e_x[0, 2 * k + 2] = 2.0
        e_x[2 * k + 1, -1] = 1.0
        e_y = np.zeros((size, size))
        e_y[0, 2 * k + 1] = -2.0
        e_y[2 * k + 2, -1] = 1.0
        basis.extend([RealMatrix(e_x), RealMatrix(e_y)])
    center = np.zeros((size, size))
    center[0, -1] = 1.0
    basis.append(RealMatrix(center))
    return basis


def heis_algebra_matrix(a: HeisenbergAlgebra) -> RealMatrix:
    basis = heis_basis(a.n)
    total = np.zeros(basis[0].shape)
    for coefficient, element in zip(a.coefficients, basis):
        total += coefficient * element.entries
    return RealMatrix(total)


def heis_bracket(a: HeisenbergAlgebra, b: HeisenbergAlgebra) -> HeisenbergAlgebra:
    """[a, b] = 4 Im<a, b> e_{2n+1}; only the planar parts contribute."""
    if a.n != b.n:
        raise DimensionMismatchError("Heisenberg dimensions differ", {"left": a.n, "right": b.n})
    central = 4.0 * complex(np.vdot(a.planar.components, b.planar.components)).imag
    coefficients = np.zeros(2 * a.n + 1)
    coefficients[-1] = central
    return HeisenbergAlgebra(coefficients)


def heis_bracket_matrix(a: HeisenbergAlgebra, b: HeisenbergAlgebra) -> Tuple[HeisenbergAlgebra, float]:
    """Bracket through matrix commutators; returns the expansion residual too."""
    if a.n != b.n:
        raise DimensionMismatchError("Heisenberg dimensions differ", {"left": a.n, "right": b.n})
    bracket = commutator(heis_algebra_matrix(a), heis_algebra_matrix(b))
    coefficients, residual = expand_in_basis(bracket, heis_basis(a.n))
    return HeisenbergAlgebra(coefficients), residual


def heis_to_classical(g: HeisenbergElement) -> RealMatrix:
    """Isomorphism of H^3 onto upper unitriangular 3x3 matrices, corner (s + 2xy)/4."""
    if g.n != 1:
        raise DimensionMismatchError("classical form exists for n = 1 only", {"n": g.n})
    zeta = complex(g.z.components[0])
    x, y = zeta.real, zeta.imag
    return RealMatrix.from_rows(
        [
            [1.0, x, (g.s + 2.0 * x * y) / 4.0],
            [0.0, 1.0, y],
            [0.0, 0.0, 1.0],
        ]
    )


# Left-invariant structure shared by both groups


def algebra_coefficients(base: GroupElement, tangent: Sequence[float]) -> AlgebraElement:
    """Left-translate a coordinate tangent vector at ``base`` to the identity.

    SU(1,1) tangents are quaternion velocities; Heisenberg tangents are
    (dx1, dy1, ..., dxn, dyn, ds).
    """
    vector = np.asarray(tangent, dtype=np.float64)
    if isinstance(base, Su11Element):
        if vector.shape != (4,):
            raise TangentMismatchError(
                "SU(1,1) tangents have four coordinates", {"shape": list(vector.shape)}
            )
        q1, q2, q3, q4 = quaternion_product(su11_inverse(base).coords, vector)
        scale = max(1.0, float(np.max(np.abs(vector))))
        if abs(q1) > settings.TANGENT_TOLERANCE * scale:
            raise TangentMismatchError(
                "vector is not tangent to SU(1,1) at the base point",
                {"normal_component": q1, "base": list(base.coords)},
            )
        return Su11Algebra(q3, q4, q2)

    if vector.shape != (2 * base.n + 1,):
        raise TangentMismatchError(
            "Heisenberg tangents have 2n+1 coordinates",
            {"n": base.n, "shape": list(vector.shape)},
        )
    dz = ComplexVector.from_real(vector[:-1])
    twist = 2.0 * complex(np.vdot(base.z.components, dz.components)).imag
    return HeisenbergAlgebra(np.concatenate([vector[:-1], [vector[-1] - twist]]))


def left_translate(base: GroupElement, a: AlgebraElement) -> np.ndarray:
    """Push an algebra element forward to a coordinate tangent at ``base``."""
    if isinstance(base, Su11Element) and isinstance(a, Su11Algebra):
        return np.array(quaternion_product(base.coords, (0.0, a.c3, a.c1, a.c2)))
    if isinstance(base, HeisenbergElement) and isinstance(a, HeisenbergAlgebra):
        if a.n != base.n:
            raise DimensionMismatchError("Heisenberg dimensions differ", {"base": base.n, "algebra": a.n})
        planar = a.planar
        twist = 2.0 * complex(np.vdot(base.z.components, planar.components)).imag
        return np.concatenate([planar.as_real(), [a.central + twist]])
    raise TangentMismatchError(
        "algebra element does not belong to the base point's group",
        {"base": type(base).__name__, "algebra": type(a).__name__},
    )


def left_invariant_inner(base: GroupElement, X: Sequence[float], Y: Sequence[float]) -> float:
    """<(ℓ_{g⁻¹})*X, (ℓ_{g⁻¹})*Y> with the algebra basis orthonormal."""
    a = algebra_coefficients(base, X)
    b = algebra_coefficients(base, Y)
    return float(np.dot(a.coefficients, b.coefficients))
