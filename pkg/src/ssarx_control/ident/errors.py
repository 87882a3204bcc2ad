"""Errors raised by the identification layer."""

from __future__ import annotations


class IdentificationError(RuntimeError):
    """Raised when a predictor cannot be identified from the supplied data."""


class ExcitationError(IdentificationError):
    """Raised when the regressor is rank deficient (input not persistently exciting)."""


__all__ = ["ExcitationError", "IdentificationError"]
