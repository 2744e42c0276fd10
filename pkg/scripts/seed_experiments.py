"""Write the worked-example experiment specs for development and testing."""

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent))

from src.models.experiment import ExperimentSpec  # noqa: E402

H = 1.0 / math.sqrt(2.0)


def seed_specs() -> List[Dict[str, Any]]:
    """Worked examples: one per bundle and plane class, plus a rejected plane."""
    return [
        {
            "id": "hopf_unit_square",
            "bundle": "CpxHyperbolic",
            "n": 1,
            "surface": {"v": [[1, 0]], "w": [[0, 1]]},
            "curve": {"kind": "Rectangle", "p": 0.0, "a": 1.0, "q": 0.0, "b": 1.0},
            "integrator": {"N": 10000, "method": "both"},
        },
        {
            "id": "hopf_reversed_square",
            "bundle": "CpxHyperbolic",
            "n": 1,
            "surface": {"v": [[1, 0]], "w": [[0, 1]]},
            "curve": {
                "kind": "Rectangle", "p": 0.0, "a": 1.0, "q": 0.0, "b": 1.0, "orientation": "Negative",
            },
        },
        {
            "id": "hopf_circle",
            "bundle": "CpxHyperbolic",
            "n": 1,
            "surface": {"v": [[1, 0]], "w": [[0, 1]]},
            "curve": {"kind": "Circle", "center": [1.5, 0.0], "radius": 0.5},
        },
        {
            "id": "totally_real_flat",
            "bundle": "CpxHyperbolic",
            "n": 2,
            "surface": {"v": [[1, 0], [0, 0]], "w": [[0, 0], [1, 0]]},
            "curve": {"kind": "Polygon", "vertices": [[0.5, 0.0], [1.5, 0.0], [1.0, 1.0]]},
        },
        {
            "id": "heisenberg_unit_circle",
            "bundle": "Heisenberg",
            "n": 1,
            "surface": {"v": [[1, 0]], "w": [[0, 1]]},
            "curve": {"kind": "Circle", "center": [0.0, 0.0], "radius": 1.0},
        },
        {
            "id": "heisenberg_tilted_plane",
            "bundle": "Heisenberg",
            "n": 2,
            "surface": {"v": [[1, 0], [0, 0]], "w": [[0, H], [H, 0]]},
            "curve": {"kind": "Rectangle", "p": -1.0, "a": 2.0, "q": -0.5, "b": 1.0},
        },
        {
            "id": "rejected_tilted_plane",
            "bundle": "CpxHyperbolic",
            "n": 2,
            "surface": {"v": [[1, 0], [0, 0]], "w": [[0, H], [H, 0]]},
            "curve": {"kind": "Rectangle", "p": 0.0, "a": 1.0, "q": 0.0, "b": 1.0},
        },
    ]


def random_rectangle_specs(count: int, seed: int = 20240611) -> List[Dict[str, Any]]:
    """Random Hopf rectangles for acceptance sweeps (p in [0, 2], a and b in [1e-3, 1])."""
    rng = np.random.default_rng(seed)
    documents = []
    for i in range(count):
        documents.append(
            {
                "id": f"random_rectangle_{i:04d}",
                "bundle": "CpxHyperbolic",
                "n": 1,
                "surface": {"v": [[1, 0]], "w": [[0, 1]]},
                "curve": {
                    "kind": "Rectangle",
                    "p": float(rng.uniform(0.0, 2.0)),
                    "a": float(rng.uniform(1e-3, 1.0)),
                    "q": float(rng.uniform(-math.pi, math.pi)),
                    "b": float(rng.uniform(1e-3, 1.0)),
                },
                "integrator": {"N": 10000, "method": "closed_form"},
            }
        )
    return documents


def write_seed_specs(
    directory: Path, overwrite: bool = False, documents: Optional[List[Dict[str, Any]]] = None
) -> List[Path]:
    """Validate every spec and write it as <id>.json."""
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for document in seed_specs() if documents is None else documents:
        spec = ExperimentSpec.model_validate(document)
        path = directory / f"{spec.id}.json"
        if path.exists() and not overwrite:
            print(f"   • {path.name} exists, skipped")
            continue
        path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
        print(f"   • {path.name}")
        written.append(path)
    return written


def main() -> None:
    parser = argparse.ArgumentParser(description="Write worked-example experiment specs")
    parser.add_argument("directory", nargs="?", default="experiments", type=Path)
    parser.add_argument("--overwrite", action="store_true", help="Replace existing spec files")
    parser.add_argument("--random", type=int, default=0, metavar="K", help="Also write K random rectangle specs")
    parser.add_argument("--seed", type=int, default=20240611, help="Seed for --random")
    args = parser.parse_args()

    print(f"Writing experiment specs to {args.directory}/ ...")
    try:
        written = write_seed_specs(args.directory, args.overwrite)
        if args.random:
            written += write_seed_specs(
                args.directory, args.overwrite, random_rectangle_specs(args.random, args.seed)
            )
    except Exception as e:
        print(f"\nSeeding failed: {e}")
        sys.exit(1)

    print(f"\n{len(written)} spec(s) written.")
    print("\nUsage:")
    print(f"   hopf-holonomy run {args.directory}/hopf_unit_square.json")
    print(f"   hopf-holonomy run --batch {args.directory}")
    print("\nThe batch exits with code 1: rejected_tilted_plane is not totally geodesic in CH².")


if __name__ == "__main__":
    main()
