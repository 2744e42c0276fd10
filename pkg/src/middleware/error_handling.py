"""Global error handling for the command-line entry points."""
import json
import sys
import traceback
from typing import Any, Callable, Dict, Optional, TextIO, TypeVar

from src.core.exceptions import (
    HolonomyError,
    InconsistencyError,
    IntegrationError,
    ValidationError,
)
from src.core.logging import get_logger, log_error

logger = get_logger(__name__)

T = TypeVar("T")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INTEGRATION = 2
EXIT_INCONSISTENT = 3


class ErrorHandler:
    """Maps exceptions to exit codes and one-line structured diagnostics."""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream

    def handle(self, exc: BaseException) -> int:
        """Log and print a diagnostic for ``exc``; return its exit code."""
        if isinstance(exc, ValidationError):
            return self._handle_validation_error(exc)
        if isinstance(exc, IntegrationError):
            return self._handle_integration_error(exc)
        if isinstance(exc, InconsistencyError):
            return self._handle_inconsistency(exc)
        if isinstance(exc, HolonomyError):
            return self._emit(exc.to_dict(), exc.exit_code)
        return self._handle_unexpected_exception(exc)

    def run(self, func: Callable[..., T], *args: Any, **kwargs: Any) -> T | int:
        """Call ``func``; on failure return the mapped exit code instead."""
        try:
            return func(*args, **kwargs)
        except Exception as e:
            return self.handle(e)

    def _handle_validation_error(self, exc: ValidationError) -> int:
        logger.warning(
            "Validation error",
            error_type=exc.error_type,
            error=exc.message,
            details=exc.details,
        )
        return self._emit(exc.to_dict(), EXIT_VALIDATION)

    def _handle_integration_error(self, exc: IntegrationError) -> int:
        logger.error(
            "Integration failure",
            error_type=exc.error_type,
            error=exc.message,
            details=exc.details,
        )
        return self._emit(exc.to_dict(), EXIT_INTEGRATION)

    def _handle_inconsistency(self, exc: InconsistencyError) -> int:
        logger.warning("Inconsistent lift methods", error=exc.message, details=exc.details)
        return self._emit(exc.to_dict(), EXIT_INCONSISTENT)

    def _handle_unexpected_exception(self, exc: BaseException) -> int:
        log_error(exc if isinstance(exc, Exception) else Exception(str(exc)))
        diagnostic = {
            "error": str(exc) or type(exc).__name__,
            "type": "internal_error",
            "exit_code": EXIT_INTEGRATION,
            "details": {
                "exception": type(exc).__name__,
                "traceback": traceback.format_exception_only(type(exc), exc)[-1].strip(),
            },
        }
        return self._emit(diagnostic, EXIT_INTEGRATION)

    def _emit(self, diagnostic: Dict[str, Any], code: int) -> int:
        stream = self.stream or sys.stderr
        stream.write(json.dumps(diagnostic, default=str) + "\n")
        stream.flush()
        return code
