"""
Translation of exceptions into command-line exit codes and diagnostics.
"""

import logging
import sys
from typing import TextIO

from pydantic import ValidationError

from app.errors import PRNetError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def format_validation_error(exc: ValidationError) -> str:
    """One-line summary of a pydantic validation error."""
    parts = []
    for error in exc.errors():
        field = ".".join(str(loc) for loc in error["loc"]) or "config"
        parts.append(f"{field}: {error['msg']}")
    return "; ".join(parts)


def handle_cli_error(exc: BaseException, stream: TextIO = None) -> int:
    """
    Log an exception and print a diagnostic.

    Args:
        exc: The exception raised by a subcommand
        stream: Where the diagnostic goes (defaults to stderr)

    Returns:
        The process exit code
    """
    stream = stream or sys.stderr

    if isinstance(exc, PRNetError):
        logger.error(
            f"Run failed: {exc.error_code}",
            extra={
                "error_code": exc.error_code,
                "error_message": exc.message,
                "details": exc.details,
            },
        )
        print(f"error [{exc.error_code}]: {exc.message}", file=stream)
        return EXIT_FAILURE

    if isinstance(exc, ValidationError):
        message = format_validation_error(exc)
        logger.error("Configuration validation failed", extra={"errors": exc.errors()})
        print(f"error [CONFIGURATION_ERROR]: {message}", file=stream)
        return EXIT_FAILURE

    logger.exception("Unhandled exception", extra={"error_type": type(exc).__name__})
    print(f"error [INTERNAL_ERROR]: {type(exc).__name__}: {exc}", file=stream)
    return EXIT_FAILURE
