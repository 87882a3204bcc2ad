"""Condensed causal multi-step predictors."""

from .condensed import PredictionError, condense, predict, predict_unrolled

__all__ = ["PredictionError", "condense", "predict", "predict_unrolled"]
