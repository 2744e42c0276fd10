"""
Pytest configuration and shared fixtures for the holonomy test suite
Provides seeded random generators, random group elements and planes, and spec files
"""

import json
import math
import shutil
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, Generator, Optional

import numpy as np
import pytest

from src.core.config import settings
from src.models.group import HeisenbergElement, Su11Element
from src.models.matrix import ComplexVector
from src.models.surface import SurfacePlane
from src.services.bundle_geometry import orthonormalize_plane

TEST_SEED = 20240611


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator; every randomized check is reproducible."""
    return np.random.default_rng(TEST_SEED)


def random_complex_vector(rng: np.random.Generator, n: int) -> ComplexVector:
    return ComplexVector(rng.normal(size=n) + 1j * rng.normal(size=n))


def random_plane(rng: np.random.Generator, n: int) -> SurfacePlane:
    """Orthonormal plane from two Gaussian vectors (generically not totally geodesic)."""
    return orthonormalize_plane(random_complex_vector(rng, n), random_complex_vector(rng, n))


def random_su11(rng: np.random.Generator, scale: float = 1.0) -> Su11Element:
    """Unit element built from a random circle part and a random hyperbolic part."""
    theta = rng.uniform(-math.pi, math.pi)
    r = rng.uniform(0.0, scale)
    phi = rng.uniform(-math.pi, math.pi)
    c = math.cosh(r)
    s = math.sinh(r)
    return Su11Element(c * math.cos(theta), c * math.sin(theta), s * math.cos(phi), s * math.sin(phi))


def random_heisenberg(rng: np.random.Generator, n: int) -> HeisenbergElement:
    return HeisenbergElement(float(rng.normal()), random_complex_vector(rng, n))


@pytest.fixture
def plane_factory(rng) -> Callable[[int], SurfacePlane]:
    return lambda n: random_plane(rng, n)


@pytest.fixture
def su11_factory(rng) -> Callable[..., Su11Element]:
    return lambda scale=1.0: random_su11(rng, scale)


@pytest.fixture
def heisenberg_factory(rng) -> Callable[[int], HeisenbergElement]:
    return lambda n: random_heisenberg(rng, n)


@pytest.fixture
def complex_plane() -> SurfacePlane:
    """span{1, i} in C, Im<v, w> = 1."""
    return SurfacePlane(ComplexVector([1.0]), ComplexVector([1j]))


@pytest.fixture
def totally_real_plane() -> SurfacePlane:
    """span{e1, e2} in C², Im<v, w> = 0."""
    return SurfacePlane(ComplexVector([1.0, 0.0]), ComplexVector([0.0, 1.0]))


@pytest.fixture
def override_settings(monkeypatch) -> Callable[..., None]:
    """Patch fields of the shared settings instance for one test."""

    def _override(**values: Any) -> None:
        for name, value in values.items():
            monkeypatch.setattr(settings, name, value)

    return _override


@pytest.fixture
def temp_directory() -> Generator[Path, None, None]:
    """Create temporary directory for file tests."""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir, ignore_errors=True)


def rectangle_spec(
    spec_id: str = "rect",
    bundle: str = "CpxHyperbolic",
    v: Optional[list] = None,
    w: Optional[list] = None,
    p: float = 0.0,
    a: float = 1.0,
    q: float = 0.0,
    b: float = 1.0,
    N: int = 400,
    method: str = "both",
) -> Dict[str, Any]:
    """Experiment spec document over a chart rectangle."""
    v = v if v is not None else [[1.0, 0.0]]
    w = w if w is not None else [[0.0, 1.0]]
    return {
        "id": spec_id,
        "bundle": bundle,
        "n": len(v),
        "surface": {"v": v, "w": w},
        "curve": {"kind": "Rectangle", "p": p, "a": a, "q": q, "b": b, "orientation": "Positive"},
        "integrator": {"N": N, "method": method},
    }


@pytest.fixture
def spec_factory() -> Callable[..., Dict[str, Any]]:
    return rectangle_spec


@pytest.fixture
def batch_directory(temp_directory) -> Path:
    """Three specs: two valid hyperbolic rectangles and one rejected plane."""
    specs = [
        rectangle_spec("a_unit", p=0.0, a=1.0, q=0.0, b=1.0),
        rectangle_spec("b_shifted", p=0.5, a=0.25, q=1.0, b=0.5),
        rectangle_spec(
            "c_rejected",
            v=[[1.0, 0.0], [0.0, 0.0]],
            w=[[0.0, 1.0 / math.sqrt(2.0)], [1.0 / math.sqrt(2.0), 0.0]],
        ),
    ]
    for spec in specs:
        (temp_directory / f"{spec['id']}.json").write_text(json.dumps(spec), encoding="utf-8")
    return temp_directory


def pytest_collection_modifyitems(config, items):
    """Add default markers based on test file location."""
    for item in items:
        path = str(item.fspath)
        if "unit" in path:
            item.add_marker(pytest.mark.unit)
        elif "integration" in path:
            item.add_marker(pytest.mark.integration)
        elif "e2e" in path:
            item.add_marker(pytest.mark.e2e)
