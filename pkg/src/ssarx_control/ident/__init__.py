"""SSARX and SPC identification of multi-step predictors."""

from .arx import assemble_toeplitz, block_toeplitz, fit_high_order_arx, true_markov_parameters
from .errors import ExcitationError, IdentificationError
from .regression import (
    RankFallback,
    ls_regression,
    reduced_rank_regression,
    whitened_singular_values,
)
from .spc import spc_fit, spc_predictor
from .ssarx import CovarianceSource, IdentificationConfig, identify_ssarx, residual_future

__all__ = [
    "CovarianceSource",
    "ExcitationError",
    "IdentificationConfig",
    "IdentificationError",
    "RankFallback",
    "assemble_toeplitz",
    "block_toeplitz",
    "fit_high_order_arx",
    "identify_ssarx",
    "ls_regression",
    "reduced_rank_regression",
    "residual_future",
    "spc_fit",
    "spc_predictor",
    "true_markov_parameters",
    "whitened_singular_values",
]
