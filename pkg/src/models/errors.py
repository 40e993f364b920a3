"""
Exception hierarchy for tensorforge
"""

from typing import Any, Optional


class ForgeError(Exception):
    """Base class for all toolkit errors"""


class ValidationError(ForgeError, ValueError):
    """Invariant or precondition violation"""


class ParseError(ValidationError):
    """Malformed tensor, matrix or subspace document"""


class SupportError(ValidationError):
    """Raised when a support is requested for the zero tensor"""


class SubspaceContainmentError(ValidationError):
    """Subspace is not contained in a flattening image"""


class BudgetExceededError(ForgeError):
    """Enumeration would exceed the configured budget"""


class ConfigError(ForgeError):
    """Bad environment or command-line configuration"""


class VerificationFailure(ForgeError):
    """A verified property failed; carries the counterexample"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness
