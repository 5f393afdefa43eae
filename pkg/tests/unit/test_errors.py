"""
Unit tests for app.errors module.
Tests the error hierarchy, stable error codes and structured details.
"""

import pytest

from app.errors import (
    ConfigurationError,
    FormatError,
    InvalidArgumentError,
    InvalidStateError,
    NumericalFailureError,
    PRNetError,
)

pytestmark = pytest.mark.unit


class TestPRNetError:
    """Test suite for the base error class."""

    def test_initialization(self):
        """Test message and details are stored."""
        error = PRNetError("Something failed", {"key": "value"})

        assert error.message == "Something failed"
        assert error.details == {"key": "value"}
        assert error.error_code == "PRNET_ERROR"
        assert str(error) == "Something failed"

    def test_default_details(self):
        """Test details default to an empty dict."""
        assert PRNetError("x").details == {}


class TestErrorFamily:
    """Test suite for the concrete error classes."""

    @pytest.mark.parametrize(
        "cls,code,builtin",
        [
            (InvalidArgumentError, "INVALID_ARGUMENT", ValueError),
            (NumericalFailureError, "NUMERICAL_FAILURE", ArithmeticError),
            (InvalidStateError, "INVALID_STATE", RuntimeError),
            (FormatError, "FORMAT_ERROR", PRNetError),
            (ConfigurationError, "CONFIGURATION_ERROR", PRNetError),
        ],
    )
    def test_codes_and_bases(self, cls, code, builtin):
        """Test each error carries its code and can be caught by its builtin base."""
        error = cls("failed", {"offset": 3})

        assert error.error_code == code
        assert isinstance(error, PRNetError)
        assert isinstance(error, builtin)
        assert error.details["offset"] == 3

    def test_caught_as_family(self):
        """Test any subclass is caught by an except clause on the base class."""
        with pytest.raises(PRNetError):
            raise NumericalFailureError("singular", {"condition": 1e20})
