"""Exception types raised by the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending key."""

    def __init__(self, key: str, constraint: str):
        self.key = key
        self.constraint = constraint
        super().__init__(f"{key}: {constraint}")


class AccuracyError(ArithmeticError):
    """A numerical self-check exceeded its tolerance.

    ``suggested_step`` is a step size (time or frequency, depending on the
    raising routine) expected to pass the check, when one can be given.
    """

    def __init__(self, message: str, suggested_step: float | None = None):
        self.suggested_step = suggested_step
        if suggested_step is not None:
            message = f"{message} (suggested step: {suggested_step:.6g})"
        super().__init__(message)


class InvalidStateError(ValueError):
    """Input does not describe a physical state (amplitude, Bloch vector, ...)."""
