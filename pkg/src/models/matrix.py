"""Dense real matrices and complex vectors."""
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from src.core.exceptions import DimensionMismatchError, ValidationError
from src.models.base import frozen_array


@dataclass(frozen=True, eq=False)
class RealMatrix:
    """Immutable dense real matrix; ``entries`` is row-major and read-only."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        array = np.asarray(self.entries, dtype=np.float64)
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise DimensionMismatchError(
                "RealMatrix needs a non-empty 2-D array",
                {"shape": list(array.shape)},
            )
        if not np.all(np.isfinite(array)):
            raise ValidationError("RealMatrix entries must be finite")
        object.__setattr__(self, "entries", frozen_array(array))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]]) -> "RealMatrix":
        return cls(np.array([list(r) for r in rows], dtype=np.float64))

    @classmethod
    def identity(cls, size: int) -> "RealMatrix":
        return cls(np.eye(size))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RealMatrix":
        return cls(np.zeros((rows, cols)))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "RealMatrix":
        return RealMatrix(self.entries.T)

    def scaled(self, factor: float) -> "RealMatrix":
        return RealMatrix(self.entries * factor)

    def __add__(self, other: "RealMatrix") -> "RealMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(
                "Cannot add matrices of different shapes",
                {"left": list(self.shape), "right": list(other.shape)},
            )
        return RealMatrix(self.entries + other.entries)

    def __sub__(self, other: "RealMatrix") -> "RealMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(
                "Cannot subtract matrices of different shapes",
                {"left": list(self.shape), "right": list(other.shape)},
            )
        return RealMatrix(self.entries - other.entries)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries)))

    def allclose(self, other: "RealMatrix", atol: float = 1e-12) -> bool:
        return self.shape == other.shape and bool(
            np.allclose(self.entries, other.entries, rtol=0.0, atol=atol)
        )

    def to_list(self) -> List[List[float]]:
        return self.entries.tolist()


@dataclass(frozen=True, eq=False)
class ComplexVector:
    """Vector in C^n; component k is x_k + i y_k."""

    components: np.ndarray

    def __post_init__(self) -> None:
        array = np.asarray(self.components, dtype=np.complex128)
        if array.ndim != 1 or array.size < 1:
            raise DimensionMismatchError(
                "ComplexVector needs a non-empty 1-D array",
                {"shape": list(array.shape)},
            )
        object.__setattr__(self, "components", frozen_array(array, np.complex128))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "ComplexVector":
        """Build from ``[[re, im], ...]`` as used in experiment specs."""
        values = []
        for pair in pairs:
            if len(pair) != 2:
                raise ValidationError("complex components are [re, im] pairs", {"pair": list(pair)})
            values.append(complex(float(pair[0]), float(pair[1])))
        return cls(np.array(values, dtype=np.complex128))

    @classmethod
    def from_real(cls, coordinates: Sequence[float]) -> "ComplexVector":
        """Inverse of :meth:`as_real` (interleaved x1, y1, ..., xn, yn)."""
        real = np.asarray(coordinates, dtype=np.float64)
        if real.ndim != 1 or real.size % 2:
            raise DimensionMismatchError("real coordinates must have even length", {"size": int(real.size)})
        return cls(real[0::2] + 1j * real[1::2])

    @property
    def dimension(self) -> int:
        return int(self.components.size)

    def as_real(self) -> np.ndarray:
        """Identify C^n with R^{2n} as (x1, y1, ..., xn, yn)."""
        real = np.empty(2 * self.dimension)
        real[0::2] = self.components.real
        real[1::2] = self.components.imag
        return real

    def to_pairs(self) -> List[List[float]]:
        return [[float(c.real), float(c.imag)] for c in self.components]

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def scaled(self, factor: complex) -> "ComplexVector":
        return ComplexVector(self.components * factor)

    def __add__(self, other: "ComplexVector") -> "ComplexVector":
        if self.dimension != other.dimension:
            raise DimensionMismatchError(
                "Cannot add vectors of different dimension",
                {"left": self.dimension, "right": other.dimension},
            )
        return ComplexVector(self.components + other.components)

    def __sub__(self, other: "ComplexVector") -> "ComplexVector":
        return self + other.scaled(-1.0)

    def allclose(self, other: "ComplexVector", atol: float = 1e-12) -> bool:
        return self.dimension == other.dimension and bool(
            np.allclose(self.components, other.components, rtol=0.0, atol=atol)
        )
