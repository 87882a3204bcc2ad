"""Subspace predictive control baseline: one least-squares map to the future outputs."""

from __future__ import annotations

import numpy as np

from ..models import CondensedPredictor
from ..stacking import HankelSet
from .regression import RankFallback, ls_regression


def spc_fit(
    hankels: HankelSet, *, fallback: RankFallback = RankFallback.NONE
) -> np.ndarray:
    """Return ``L`` with ``Y_f ~ L [Z_p; U_f]``."""

    regressor = np.vstack([hankels.Z_p, hankels.U_f])
    return ls_regression(hankels.Y_f, regressor, fallback=fallback)


def spc_predictor(
    hankels: HankelSet, *, fallback: RankFallback = RankFallback.NONE
) -> CondensedPredictor:
    """Split ``L`` into the past and future-input blocks used by the controller."""

    L = spc_fit(hankels, fallback=fallback)
    past = hankels.Z_p.shape[0]
    return CondensedPredictor(
        P_z=L[:, :past],
        P_u=L[:, past:],
        l_p=hankels.l_p,
        l_f=hankels.l_f,
        n_u=hankels.n_u,
        n_y=hankels.n_y,
        label="spc",
    )


__all__ = ["spc_fit", "spc_predictor"]
