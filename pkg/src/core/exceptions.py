"""Exception hierarchy for the holonomy toolkit.

Every exception carries the process exit code the CLI reports for it and a
``details`` dict that ends up in the structured diagnostic.
"""
from typing import Any, Dict, Optional


class HolonomyError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 2
    error_type: str = "holonomy_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": self.message,
            "type": self.error_type,
            "exit_code": self.exit_code,
            "details": self.details,
        }


# Validation errors (exit 1)


class ValidationError(HolonomyError):
    """Input rejected before any integration started."""

    exit_code = 1
    error_type = "validation_error"


class DimensionMismatchError(ValidationError):
    """Operands of incompatible shapes or group dimensions."""

    error_type = "dimension_mismatch"


class ConstraintViolationError(ValidationError):
    """A group element is off its defining quadric beyond tolerance."""

    error_type = "constraint_violation"


class TangentMismatchError(ValidationError):
    """A tangent vector does not belong to the tangent space at its base point."""

    error_type = "tangent_mismatch"


class NonOrthonormalPlaneError(ValidationError):
    """A surface plane basis is not orthonormal over the reals."""

    error_type = "non_orthonormal_plane"


class DegeneratePlaneError(ValidationError):
    """The two spanning vectors are linearly dependent."""

    error_type = "degenerate_plane"


class CurveValidationError(ValidationError):
    """A chart curve is not closed, leaves the chart, or cannot be sampled."""

    error_type = "curve_validation"


class ClassificationRejectedError(ValidationError):
    """The plane does not span a totally geodesic surface in the hyperbolic base."""

    error_type = "classification_rejected"


class SpecValidationError(ValidationError):
    """An experiment spec failed schema or consistency checks."""

    error_type = "spec_validation"


# Integration errors (exit 2)


class IntegrationError(HolonomyError):
    """Numerical integration could not meet its accuracy contract."""

    exit_code = 2
    error_type = "integration_error"


class BracketClosureError(IntegrationError):
    """A Lie bracket did not expand back into the algebra basis."""

    error_type = "bracket_closure"


class DegenerateCurveError(IntegrationError):
    """Zero-length curve where a positive length is required."""

    error_type = "degenerate_curve"


# Inconsistency (exit 3)


class InconsistencyError(HolonomyError):
    """Independent lift methods disagree beyond the configured threshold."""

    exit_code = 3
    error_type = "inconsistency"
