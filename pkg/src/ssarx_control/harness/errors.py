"""Errors raised by the experiment harness."""

from __future__ import annotations


class ExperimentError(RuntimeError):
    """Raised when an experiment cannot be configured, run or reported."""


class NoiseLookupError(ExperimentError):
    """Raised when a noise label does not name a grid entry."""


__all__ = ["ExperimentError", "NoiseLookupError"]
