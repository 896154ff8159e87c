"""Exception types shared across the package."""

from __future__ import annotations


class HardyscopeError(Exception):
    """Base class for all package-specific errors."""


class SpaceValidationError(HardyscopeError):
    """Raised when a space descriptor or parameter pair is not admissible."""


class DomainError(HardyscopeError):
    """Raised when an operator or weight is evaluated outside its domain."""


class PreconditionError(HardyscopeError):
    """Raised when a constructor's parameter constraints are violated."""


class QuadratureError(HardyscopeError):
    """Raised when an integral cannot be certified to the requested accuracy."""
