"""Exception types raised across the package."""

from __future__ import annotations


class SingularParameterError(ValueError):
    """A formula was evaluated at (or too close to) a parameter value where it
    degenerates, e.g. the complementary-state construction at mu -> 0."""


class IntegrationDivergedError(RuntimeError):
    """The master-equation integration left the physical manifold.

    Carries the step index at which the violation was detected.
    """

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class ConfigError(ValueError):
    """Invalid run configuration, with per-field messages."""

    def __init__(self, field_errors: dict[str, str]):
        self.field_errors = dict(field_errors)
        details = "; ".join(f"{k}: {v}" for k, v in sorted(self.field_errors.items()))
        super().__init__(f"invalid configuration: {details}")


class UnknownFigureError(ValueError):
    """Requested figure id has no bundled configuration."""
