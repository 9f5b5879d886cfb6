"""Exception types shared across the package.

The CLI maps these onto exit codes: plain ``ValueError`` (bad option
values) exits 2, the math-level errors below exit 3.
"""


class DomainError(ValueError):
    """Input violates a mathematical precondition (singular point, bad range)."""


class NoInteriorOrbitError(DomainError):
    """The closed-form interior 2-cycle does not exist or leaves the open quadrant."""


class BlowupError(ArithmeticError):
    """A trajectory coordinate exceeded the overflow guard (1e300)."""


class StaleOrbitError(ValueError):
    """An Orbit2 failed its residual re-check and cannot be analyzed."""
