"""Numerical services: linear algebra, groups, geometry, curves, lifts and runs."""

from .bundle_models import BundleModel, HeisenbergModel, ProductModel, Su11HopfModel, bundle_model
from .experiment_runner import BatchSummary, ExperimentRunner, RunResult
from .holonomy_engine import flat_model, holonomy, holonomy_with_trace
from .storage import ReportStorage

__all__ = [
    "BundleModel", "Su11HopfModel", "ProductModel", "HeisenbergModel", "bundle_model",
    "holonomy", "holonomy_with_trace", "flat_model",
    "ExperimentRunner", "RunResult", "BatchSummary",
    "ReportStorage",
]
