"""
Error reporting utilities for formdiv.
"""
from enum import Enum
from typing import Optional


class ErrorCode(str, Enum):
    """Standard error codes for formdiv operations"""
    DOMAIN = "DOMAIN"
    OVERFLOW = "OVERFLOW"
    FACTOR_CEILING = "FACTOR_CEILING"
    PRIME_BOUND = "PRIME_BOUND"
    CATALOG_MISSING = "CATALOG_MISSING"
    CATALOG_MALFORMED = "CATALOG_MALFORMED"
    CATALOG_SCHEMA = "CATALOG_SCHEMA"
    UNKNOWN_RECORD = "UNKNOWN_RECORD"
    UNKNOWN_FAMILY = "UNKNOWN_FAMILY"
    USAGE = "USAGE"


def format_error(code: ErrorCode, message: str, path: Optional[str] = None) -> str:
    """Format error message with consistent prefix and optional context"""
    if path:
        return f"E[{code.value}] {message}: {path}"
    return f"E[{code.value}] {message}"


class FormdivError(Exception):
    """Base class for every error raised by formdiv."""

    code = ErrorCode.DOMAIN

    def __init__(self, message: str, context: Optional[str] = None, code: Optional[ErrorCode] = None):
        if code is not None:
            self.code = code
        self.message = message
        self.context = context
        super().__init__(format_error(self.code, message, context))

    def __reduce__(self):
        return (self.__class__, (self.message, self.context, self.code))


class DomainError(FormdivError, ValueError):
    """An argument lies outside the domain of an operation."""

    code = ErrorCode.DOMAIN


class ArithmeticOverflow(FormdivError, OverflowError):
    """A value left the signed 64-bit range."""

    code = ErrorCode.OVERFLOW


class OracleFailure(FormdivError):
    """A brute-force oracle ran out of budget before it could answer."""

    code = ErrorCode.FACTOR_CEILING


class CatalogError(FormdivError):
    """The catalog asset is missing or malformed."""

    code = ErrorCode.CATALOG_MALFORMED


class UsageError(FormdivError):
    """A command-line selector does not name anything known."""

    code = ErrorCode.USAGE
