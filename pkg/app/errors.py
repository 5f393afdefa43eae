"""Domain-level error definitions.

Every error raised by the numerical core, the file codecs and the experiment
harness derives from ``PRNetError`` so callers can handle the whole family in
one place while still reading a stable ``error_code`` and structured
``details``.
"""

from typing import Any, Dict, Optional


class PRNetError(Exception):
    """Base class for channel-extrapolation errors."""

    error_code = "PRNET_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class InvalidArgumentError(PRNetError, ValueError):
    """Raised when an input violates an operation's precondition."""

    error_code = "INVALID_ARGUMENT"


class NumericalFailureError(PRNetError, ArithmeticError):
    """Raised when a linear system is singular beyond tolerance.

    ``details["condition"]`` carries the condition estimate that tripped the check.
    """

    error_code = "NUMERICAL_FAILURE"


class InvalidStateError(PRNetError, RuntimeError):
    """Raised when an object is used outside its valid lifecycle (e.g. a stale cache)."""

    error_code = "INVALID_STATE"


class FormatError(PRNetError):
    """Raised when a dataset or checkpoint file cannot be decoded.

    ``details["offset"]`` is the byte offset where decoding failed.
    """

    error_code = "FORMAT_ERROR"


class ConfigurationError(PRNetError):
    """Raised for inconsistent experiment configuration or missing run inputs."""

    error_code = "CONFIGURATION_ERROR"
