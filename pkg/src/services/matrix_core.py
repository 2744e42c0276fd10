"""Dense real-matrix arithmetic and the C -> R embedding convention.

A complex entry x + iy is realized as the 2x2 block [[x, -y], [y, x]], so a
complex n x n matrix becomes a real 2n x 2n matrix. Every matrix that
appears in the group and bundle modules lives in this representation.
"""
import math
from typing import Any, Optional, Sequence, Tuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import DimensionMismatchError, ValidationError
from src.models.matrix import ComplexVector, RealMatrix

_MAX_SERIES_TERMS = 64


def _as_complex_matrix(Z: Any) -> np.ndarray:
    """Accept a complex ndarray or nested ``[re, im]`` pairs."""
    array = np.asarray(Z)
    if np.iscomplexobj(array):
        return array.astype(np.complex128)
    array = np.asarray(Z, dtype=np.float64)
    if array.ndim == 3 and array.shape[-1] == 2:
        return array[..., 0] + 1j * array[..., 1]
    if array.ndim == 2:
        return array.astype(np.complex128)
    raise DimensionMismatchError(
        "complex matrix must be 2-D complex or nested [re, im] pairs",
        {"shape": list(array.shape)},
    )


def embed_complex(Z: Any) -> RealMatrix:
    """Realize a square complex matrix as a real matrix of doubled size."""
    complex_matrix = _as_complex_matrix(Z)
    if complex_matrix.ndim != 2 or complex_matrix.shape[0] != complex_matrix.shape[1]:
        raise DimensionMismatchError(
            "embed_complex needs a square matrix",
            {"shape": list(complex_matrix.shape)},
        )
    n = complex_matrix.shape[0]
    real = np.zeros((2 * n, 2 * n))
    real[0::2, 0::2] = complex_matrix.real
    real[0::2, 1::2] = -complex_matrix.imag
    real[1::2, 0::2] = complex_matrix.imag
    real[1::2, 1::2] = complex_matrix.real
    return RealMatrix(real)


def mat_mul(A: RealMatrix, B: RealMatrix) -> RealMatrix:
    """Standard matrix product."""
    if A.cols != B.rows:
        raise DimensionMismatchError(
            "inner dimensions do not agree",
            {"left": list(A.shape), "right": list(B.shape)},
        )
    return RealMatrix(A.entries @ B.entries)


def mat_chain(*matrices: RealMatrix) -> RealMatrix:
    """Left-to-right product of several matrices."""
    if not matrices:
        raise ValidationError("mat_chain needs at least one matrix")
    result = matrices[0]
    for matrix in matrices[1:]:
        result = mat_mul(result, matrix)
    return result


def commutator(A: RealMatrix, B: RealMatrix) -> RealMatrix:
    """AB − BA."""
    return mat_mul(A, B) - mat_mul(B, A)


def mat_exp(A: RealMatrix, tolerance: Optional[float] = None) -> RealMatrix:
    """Matrix exponential by scaling and squaring with a Taylor series.

    The argument is scaled by 2^-s until its infinity norm is at most 1/2,
    the series is summed until a term drops below the tolerance, and the
    result is squared s times.
    """
    if not A.is_square:
        raise DimensionMismatchError("mat_exp needs a square matrix", {"shape": list(A.shape)})
    tol = settings.EXP_TOLERANCE if tolerance is None else tolerance

    X = A.entries
    norm = float(np.linalg.norm(X, ord=np.inf))
    squarings = 0
    if norm > 0.5:
        squarings = int(math.ceil(math.log2(norm / 0.5)))
    scaled = X / (2.0 ** squarings)

    size = A.rows
    result = np.eye(size)
    term = np.eye(size)
    # Term tolerance is tightened so the squarings cannot lift the error above tol
    term_tol = tol * 2.0 ** (-squarings) * 1e-3
    for k in range(1, _MAX_SERIES_TERMS + 1):
        term = term @ scaled / k
        result = result + term
        if np.max(np.abs(term)) <= term_tol:
            break

    for _ in range(squarings):
        result = result @ result
    return RealMatrix(result)


def mat_inverse(A: RealMatrix) -> RealMatrix:
    """Inverse by solving A X = I."""
    if not A.is_square:
        raise DimensionMismatchError("mat_inverse needs a square matrix", {"shape": list(A.shape)})
    try:
        return RealMatrix(np.linalg.solve(A.entries, np.eye(A.rows)))
    except np.linalg.LinAlgError as e:
        raise ValidationError("matrix is singular", {"shape": list(A.shape)}) from e


def expand_in_basis(X: RealMatrix, basis: Sequence[RealMatrix]) -> Tuple[np.ndarray, float]:
    """Least-squares coefficients of X in ``basis`` and the max-entry residual."""
    if not basis:
        raise ValidationError("expand_in_basis needs a non-empty basis")
    for element in basis:
        if element.shape != X.shape:
            raise DimensionMismatchError(
                "basis matrix shape differs from the expanded matrix",
                {"basis": list(element.shape), "matrix": list(X.shape)},
            )
    design = np.stack([element.entries.ravel() for element in basis], axis=1)
    target = X.entries.ravel()
    coefficients, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = float(np.max(np.abs(design @ coefficients - target)))
    return coefficients, residual


def hermitian_inner(v: ComplexVector, w: ComplexVector) -> complex:
    """<v, w> = sum conj(v_k) w_k."""
    if v.dimension != w.dimension:
        raise DimensionMismatchError(
            "vectors must have equal dimension", {"v": v.dimension, "w": w.dimension}
        )
    return complex(np.vdot(v.components, w.components))


def real_inner(v: ComplexVector, w: ComplexVector) -> float:
    """Euclidean inner product of the R^{2n} realizations, Re<v, w>."""
    return hermitian_inner(v, w).real

