"""Elements and Lie algebra vectors of SU(1,1) and the complex Heisenberg group."""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.core.exceptions import DimensionMismatchError
from src.models.base import frozen_array
from src.models.matrix import ComplexVector


@dataclass(frozen=True)
class Su11Element:
    """SU(1,1) element in quaternion coordinates w1 + w2 i + w3 j + w4 k.

    The coordinates are the ground truth; the 4x4 realization is built on
    demand by ``groups.su11_matrix``. Points of the pseudo-sphere S^{2,1} use
    the same type.
    """

    w1: float
    w2: float
    w3: float
    w4: float

    @classmethod
    def identity(cls) -> "Su11Element":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_coords(cls, coords: Tuple[float, float, float, float] | np.ndarray) -> "Su11Element":
        w1, w2, w3, w4 = (float(c) for c in coords)
        return cls(w1, w2, w3, w4)

    @property
    def coords(self) -> Tuple[float, float, float, float]:
        return (self.w1, self.w2, self.w3, self.w4)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords)

    @property
    def form(self) -> float:
        """w1² + w2² − w3² − w4², equal to 1 on the group."""
        return self.w1 * self.w1 + self.w2 * self.w2 - self.w3 * self.w3 - self.w4 * self.w4

    def isclose(self, other: "Su11Element", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.as_array(), other.as_array(), rtol=0.0, atol=atol))


@dataclass(frozen=True)
class Su11Algebra:
    """Element c1 e1 + c2 e2 + c3 e3 of su(1,1); e3 spans the fiber direction."""

    c1: float
    c2: float
    c3: float

    @classmethod
    def basis(cls, index: int) -> "Su11Algebra":
        """The orthonormal basis vector e_index, index in {1, 2, 3}."""
        if index not in (1, 2, 3):
            raise DimensionMismatchError("su(1,1) basis index must be 1, 2 or 3", {"index": index})
        coefficients = [0.0, 0.0, 0.0]
        coefficients[index - 1] = 1.0
        return cls(*coefficients)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3])

    def __add__(self, other: "Su11Algebra") -> "Su11Algebra":
        return Su11Algebra(self.c1 + other.c1, self.c2 + other.c2, self.c3 + other.c3)

    def scaled(self, factor: float) -> "Su11Algebra":
        return Su11Algebra(self.c1 * factor, self.c2 * factor, self.c3 * factor)

    def isclose(self, other: "Su11Algebra", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coefficients, other.coefficients, rtol=0.0, atol=atol))


@dataclass(frozen=True, eq=False)
class HeisenbergElement:
    """Element (s, z) of H^{2n+1} = R × C^n."""

    s: float
    z: ComplexVector

    @classmethod
    def identity(cls, n: int) -> "HeisenbergElement":
        return cls(0.0, ComplexVector(np.zeros(n, dtype=np.complex128)))

    @classmethod
    def from_coords(cls, coords: np.ndarray | Tuple[float, ...]) -> "HeisenbergElement":
        """Inverse of :meth:`coords`."""
        array = np.asarray(coords, dtype=np.float64)
        return cls(float(array[-1]), ComplexVector.from_real(array[:-1]))

    @property
    def n(self) -> int:
        return self.z.dimension

    @property
    def coords(self) -> np.ndarray:
        """(x1, y1, ..., xn, yn, s), the order of the algebra basis e1 ... e_{2n+1}."""
        return np.concatenate([self.z.as_real(), [self.s]])

    def isclose(self, other: "HeisenbergElement", atol: float = 1e-12) -> bool:
        return (
            self.n == other.n
            and abs(self.s - other.s) <= atol
            and self.z.allclose(other.z, atol=atol)
        )


@dataclass(frozen=True, eq=False)
class HeisenbergAlgebra:
    """Coefficients (c1, ..., c_{2n+1}) in the orthonormal basis; c_{2n+1} is central."""

    coefficients: np.ndarray

    def __post_init__(self) -> None:
        array = np.asarray(self.coefficients, dtype=np.float64)
        if array.ndim != 1 or array.size < 3 or array.size % 2 == 0:
            raise DimensionMismatchError(
                "Heisenberg algebra vectors have odd length 2n+1 >= 3",
                {"size": int(array.size)},
            )
        object.__setattr__(self, "coefficients", frozen_array(array))

    @classmethod
    def basis(cls, n: int, index: int) -> "HeisenbergAlgebra":
        """The orthonormal basis vector e_index, 1 <= index <= 2n+1."""
        if not 1 <= index <= 2 * n + 1:
            raise DimensionMismatchError(
                "Heisenberg basis index out of range", {"n": n, "index": index}
            )
        coefficients = np.zeros(2 * n + 1)
        coefficients[index - 1] = 1.0
        return cls(coefficients)

    @classmethod
    def from_vector(cls, z: ComplexVector, central: float = 0.0) -> "HeisenbergAlgebra":
        return cls(np.concatenate([z.as_real(), [central]]))

    @property
    def n(self) -> int:
        return (int(self.coefficients.size) - 1) // 2

    @property
    def central(self) -> float:
        return float(self.coefficients[-1])

    @property
    def planar(self) -> ComplexVector:
        return ComplexVector.from_real(self.coefficients[:-1])

    def __add__(self, other: "HeisenbergAlgebra") -> "HeisenbergAlgebra":
        if self.n != other.n:
            raise DimensionMismatchError("Heisenberg dimensions differ", {"left": self.n, "right": other.n})
        return HeisenbergAlgebra(self.coefficients + other.coefficients)

    def scaled(self, factor: float) -> "HeisenbergAlgebra":
        return HeisenbergAlgebra(self.coefficients * factor)

    def isclose(self, other: "HeisenbergAlgebra", atol: float = 1e-12) -> bool:
        return self.n == other.n and bool(
            np.allclose(self.coefficients, other.coefficients, rtol=0.0, atol=atol)
        )


@dataclass(frozen=True)
class CH1Point:
    """Point (X, Y, Z) of the hyperboloid X² − Y² − Z² = 1, X > 0."""

    X: float
    Y: float
    Z: float

    @property
    def coords(self) -> Tuple[float, float, float]:
        return (self.X, self.Y, self.Z)

    @property
    def form(self) -> float:
        return self.X * self.X - self.Y * self.Y - self.Z * self.Z

    def isclose(self, other: "CH1Point", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coords, other.coords, rtol=0.0, atol=atol))
