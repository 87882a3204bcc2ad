"""Identified predictor models consumed by the controllers."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np


class PredictorVariant(str, Enum):
    """Stage-2 regression used to estimate the past-to-future map."""

    LS = "ls"
    LOW_RANK = "low_rank"


@dataclass(slots=True)
class ArxEstimate:
    """High-order ARX fit holding the predictor Markov parameter blocks.

    ``phi_y`` has shape ``(n_a, n_y, n_y)`` and ``phi_u`` shape ``(n_b, n_y, n_u)``;
    lag ``0`` of ``phi_y`` is structurally zero and lag ``0`` of ``phi_u`` is only
    estimated when feedthrough is enabled.
    """

    phi_y: np.ndarray
    phi_u: np.ndarray
    residual_variance: np.ndarray
    rank_deficient: bool = False
    samples: int = 0

    @property
    def n_a(self) -> int:
        return self.phi_y.shape[0]

    @property
    def n_b(self) -> int:
        return self.phi_u.shape[0]

    @property
    def n_y(self) -> int:
        return self.phi_y.shape[1]

    @property
    def n_u(self) -> int:
        return self.phi_u.shape[2]


@dataclass(slots=True)
class PredictorModel:
    """SSARX multi-step predictor ``y_f = GK z_p + Phi_u u_f + Phi_y y_f``."""

    gamma_k: np.ndarray
    phi_u_big: np.ndarray
    phi_y_big: np.ndarray
    l_p: int
    l_f: int
    n_u: int
    n_y: int
    variant: PredictorVariant = PredictorVariant.LS
    rank: Optional[int] = None
    hyperparameters: Dict[str, Any] = field(default_factory=dict)

    @property
    def variant_tag(self) -> str:
        if self.variant is PredictorVariant.LOW_RANK:
            return f"low_rank({self.rank})"
        return self.variant.value


@dataclass(slots=True, frozen=True)
class CondensedPredictor:
    """Affine-in-``u_f`` prediction map ``y_f = P_z z_p + P_u u_f``."""

    P_z: np.ndarray
    P_u: np.ndarray
    l_p: int
    l_f: int
    n_u: int
    n_y: int
    label: str = "ssarx"
    source: Optional[PredictorModel] = None
