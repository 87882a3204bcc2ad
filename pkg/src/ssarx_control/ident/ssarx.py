"""SSARX identification: ARX Markov parameters, then regression onto past data."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Optional

import numpy as np

from ..models import PredictorModel, PredictorVariant, TrajectoryData
from ..stacking import HankelSet, build_hankels
from .arx import assemble_toeplitz, fit_high_order_arx
from .errors import IdentificationError
from .regression import RankFallback, ls_regression, reduced_rank_regression

logger = logging.getLogger(__name__)


class CovarianceSource(str, Enum):
    """Which future block feeds the reduced-rank covariances."""

    TARGET = "target"
    RAW_FUTURE = "raw_future"


@dataclass(slots=True, frozen=True)
class IdentificationConfig:
    """Horizons, ARX orders and Stage-2 options of one SSARX fit."""

    l_p: int
    l_f: int
    n_a: int
    n_b: int
    variant: PredictorVariant = PredictorVariant.LS
    rank: Optional[int] = None
    include_feedthrough: bool = False
    rank_fallback: RankFallback = RankFallback.NONE
    regularize: bool = False
    covariance_source: CovarianceSource = CovarianceSource.TARGET

    def __post_init__(self) -> None:
        if self.l_p < 1 or self.l_f < 1:
            raise IdentificationError(f"horizons must be positive, got {self.l_p}, {self.l_f}")
        if self.n_a < self.l_f or self.n_b < self.l_f:
            raise IdentificationError(
                f"ARX orders n_a={self.n_a}, n_b={self.n_b} must be at least L_f={self.l_f}"
            )
        if self.variant is PredictorVariant.LOW_RANK and not self.rank:
            raise IdentificationError("low-rank variant requires a rank")

    def hyperparameters(self) -> dict[str, Any]:
        data = asdict(self)
        return {
            key: value.value if isinstance(value, Enum) else value for key, value in data.items()
        }


def residual_future(
    hankels: HankelSet, phi_u_big: np.ndarray, phi_y_big: np.ndarray
) -> np.ndarray:
    """``Y_f - Phi_u U_f - Phi_y Y_f``: the part of the future set by the past."""

    Y_f, U_f = hankels.Y_f, hankels.U_f
    if phi_u_big.shape != (Y_f.shape[0], U_f.shape[0]):
        raise IdentificationError(
            f"Phi_u must be {(Y_f.shape[0], U_f.shape[0])}, got {phi_u_big.shape}"
        )
    if phi_y_big.shape != (Y_f.shape[0], Y_f.shape[0]):
        raise IdentificationError(
            f"Phi_y must be {(Y_f.shape[0], Y_f.shape[0])}, got {phi_y_big.shape}"
        )
    return Y_f - phi_u_big @ U_f - phi_y_big @ Y_f


def identify_ssarx(traj: TrajectoryData, cfg: IdentificationConfig) -> PredictorModel:
    """Run the SSARX identification steps and return the multi-step predictor."""

    hankels = build_hankels(traj, cfg.l_p, cfg.l_f)
    arx = fit_high_order_arx(
        traj, cfg.n_a, cfg.n_b, include_feedthrough=cfg.include_feedthrough
    )
    phi_u_big, phi_y_big = assemble_toeplitz(arx, cfg.l_f)
    target = residual_future(hankels, phi_u_big, phi_y_big)

    if cfg.variant is PredictorVariant.LOW_RANK:
        raw = hankels.Y_f if cfg.covariance_source is CovarianceSource.RAW_FUTURE else None
        gamma_k = reduced_rank_regression(
            target, hankels.Z_p, int(cfg.rank), raw_future=raw, regularize=cfg.regularize
        )
    else:
        gamma_k = ls_regression(target, hankels.Z_p, fallback=cfg.rank_fallback)

    hyperparameters = cfg.hyperparameters()
    hyperparameters.update(
        samples=traj.length,
        hankel_columns=hankels.columns,
        arx_rank_deficient=arx.rank_deficient,
    )
    logger.info(
        "identified SSARX predictor (%s) from %d samples", cfg.variant.value, traj.length
    )
    return PredictorModel(
        gamma_k=gamma_k,
        phi_u_big=phi_u_big,
        phi_y_big=phi_y_big,
        l_p=cfg.l_p,
        l_f=cfg.l_f,
        n_u=traj.n_u,
        n_y=traj.n_y,
        variant=cfg.variant,
        rank=cfg.rank if cfg.variant is PredictorVariant.LOW_RANK else None,
        hyperparameters=hyperparameters,
    )


__all__ = ["CovarianceSource", "IdentificationConfig", "identify_ssarx", "residual_future"]
