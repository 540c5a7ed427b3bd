"""
ERRORS

Exception classes raised across SELECTQ. Each one specialises a builtin so
that callers catching `ValueError` or `ArithmeticError` keep working.
"""


class ShapeError(ValueError):
    """Dimension, width or permutation size mismatch."""


class NonFiniteError(ArithmeticError):
    """A NaN or infinite value reached a matrix, gradient or loss."""


class InfeasibleActionError(ValueError):
    """A phase action outside A(s)."""


class GuardError(ValueError):
    """An enumeration would exceed its size guard."""


class ConfigError(ValueError):
    """Invalid or unknown configuration entries."""


class TransferError(ValueError):
    """Parameters that cannot be rebuilt for a different item count."""
