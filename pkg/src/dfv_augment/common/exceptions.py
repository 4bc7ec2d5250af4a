"""Custom exceptions for command exit mapping."""

from __future__ import annotations


class DfvError(Exception):
    """Base class for every error raised by dfv_augment."""


class ConfigError(DfvError):
    """Raised when a configuration field violates its constraint."""

    def __init__(self, field: str, constraint: str) -> None:
        super().__init__(f"invalid config field '{field}': {constraint}")
        self.field = field
        self.constraint = constraint


class DataError(DfvError):
    """Raised when input data (images, manifests, splits, checkpoints) is unusable."""


class ShapeError(DataError):
    """Raised by tensor ops on incompatible shapes."""


class NumericError(DfvError):
    """Raised when a forward or backward pass produces NaN or Inf."""
