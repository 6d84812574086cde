"""Shared exception types.

The CLI maps these onto process exit codes: bad or malformed input exits
with 2, an exhausted search or enumeration budget exits with 3, and a
failed verification suite exits with 1.
"""

from __future__ import annotations


class InputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class TruncationError(InputError):
    """Raised when an object is read above its certified dimension.

    Carries the dimension that would be needed so callers can rebuild the
    object with a larger cutoff.
    """

    def __init__(self, message: str, needed: int | None = None):
        super().__init__(message)
        self.needed = needed


class BudgetError(RuntimeError):
    """Raised when an enumeration or search exceeds its explicit budget."""
