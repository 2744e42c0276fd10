"""Command-line middleware."""

from .error_handling import ErrorHandler

__all__ = [
    "ErrorHandler",
]
