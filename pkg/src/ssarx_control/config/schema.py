"""Validated experiment configuration."""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..ident import CovarianceSource, IdentificationConfig, RankFallback
from ..models import (
    ControllerConfig,
    ControllerConfigError,
    Method,
    ModelDimensionError,
    NoiseConfig,
    PredictorVariant,
    StateSpaceModel,
)

Matrix = List[List[float]]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PlantSpec(_Strict):
    A: Matrix
    B: Matrix
    C: Matrix
    D: Matrix

    def build(self) -> StateSpaceModel:
        return StateSpaceModel(A=self.A, B=self.B, C=self.C, D=self.D)


class NoiseSpec(_Strict):
    sigma_v: float = Field(ge=0)
    sigma_w: float = Field(ge=0)
    label: str = "custom"

    def build(self) -> NoiseConfig:
        return NoiseConfig(sigma_v=self.sigma_v, sigma_w=self.sigma_w, label=self.label)


class ReferenceSpec(_Strict):
    """Test reference: one sinusoid period over the run, a constant or a square wave."""

    kind: Literal["sinusoid", "constant", "square_wave"] = "sinusoid"
    value: float = 1.0
    period: Optional[float] = Field(default=None, gt=0)
    amplitude: float = 1.0
    jitter_var: float = Field(default=0.0, ge=0)


class TrainingSpec(_Strict):
    """Square-wave excitation of the closed-loop training experiment."""

    period: int = Field(default=50, gt=0)
    amplitude: float = Field(default=2.0, gt=0)
    jitter_var: float = Field(default=0.01, ge=0)


class ExperimentConfig(_Strict):
    plant: PlantSpec
    noise: List[Union[str, NoiseSpec]] = Field(default_factory=lambda: ["20dB-group3"])
    n_train: List[int] = Field(default_factory=lambda: [200])
    n_test: int = Field(default=100, gt=0)
    l_p: int = Field(default=10, gt=0)
    l_f: int = Field(default=15, gt=0)
    n_a: int = Field(default=15, gt=0)
    n_b: int = Field(default=15, gt=0)
    Q: Union[float, Matrix] = 1.0
    R: Union[float, Matrix] = 0.01
    u_min: Optional[float] = -2.0
    u_max: Optional[float] = 2.0
    y_min: Optional[float] = -2.0
    y_max: Optional[float] = 2.0
    soft_penalty: float = Field(default=1e4, gt=0)
    qp_tolerance: float = Field(default=1e-8, gt=0)
    methods: List[Method] = Field(
        default_factory=lambda: [Method.SPC, Method.SSARX, Method.SSARX_LR, Method.MPC_SSKF]
    )
    lr_rank: int = Field(default=2, gt=0)
    lr_covariance: CovarianceSource = CovarianceSource.TARGET
    rank_fallback: RankFallback = RankFallback.NONE
    n_mc: int = Field(default=100, ge=1)
    full_n_mc: int = Field(default=500, ge=1)
    master_seed: int = Field(default=0, ge=0)
    reference: ReferenceSpec = Field(default_factory=ReferenceSpec)
    training: TrainingSpec = Field(default_factory=TrainingSpec)
    stationary_window: Tuple[int, int] = (50, 100)
    workers: int = Field(default=1, ge=1)

    @field_validator("methods")
    @classmethod
    def _methods_nonempty(cls, value: List[Method]) -> List[Method]:
        if not value:
            raise ValueError("at least one method is required")
        return list(dict.fromkeys(value))

    @field_validator("n_train")
    @classmethod
    def _train_lengths_positive(cls, value: List[int]) -> List[int]:
        if not value or any(length <= 0 for length in value):
            raise ValueError("n_train must list positive training lengths")
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        start, stop = self.stationary_window
        if not 0 <= start < stop <= self.n_test:
            raise ValueError(
                f"stationary window [{start}, {stop}) must lie inside [0, {self.n_test})"
            )
        if self.n_a < self.l_f or self.n_b < self.l_f:
            raise ValueError(f"n_a and n_b must be at least l_f={self.l_f}")
        if not self.noise:
            raise ValueError("at least one noise point is required")
        try:
            plant = self.plant_model()
        except ModelDimensionError as exc:
            raise ValueError(f"plant: {exc}") from exc
        try:
            controller = self.controller_config()
        except ControllerConfigError as exc:
            raise ValueError(f"controller: {exc}") from exc
        if (controller.n_y, controller.n_u) != (plant.n_y, plant.n_u):
            raise ValueError(
                f"Q and R are sized for n_y={controller.n_y}, n_u={controller.n_u}; "
                f"plant has n_y={plant.n_y}, n_u={plant.n_u}"
            )
        return self

    # ------------------------------------------------------------------
    def plant_model(self) -> StateSpaceModel:
        return self.plant.build()

    def controller_config(self) -> ControllerConfig:
        return ControllerConfig(
            Q=np.atleast_2d(np.asarray(self.Q, dtype=float)),
            R=np.atleast_2d(np.asarray(self.R, dtype=float)),
            l_p=self.l_p,
            l_f=self.l_f,
            u_min=self.u_min,
            u_max=self.u_max,
            y_min=self.y_min,
            y_max=self.y_max,
            soft_penalty=self.soft_penalty,
            qp_tolerance=self.qp_tolerance,
        )

    def identification_config(
        self, variant: PredictorVariant = PredictorVariant.LS
    ) -> IdentificationConfig:
        low_rank = variant is PredictorVariant.LOW_RANK
        return IdentificationConfig(
            l_p=self.l_p,
            l_f=self.l_f,
            n_a=self.n_a,
            n_b=self.n_b,
            variant=variant,
            rank=self.lr_rank if low_rank else None,
            rank_fallback=self.rank_fallback,
            covariance_source=self.lr_covariance,
            regularize=low_rank and self.rank_fallback is not RankFallback.NONE,
        )


__all__ = [
    "ExperimentConfig",
    "NoiseSpec",
    "PlantSpec",
    "ReferenceSpec",
    "TrainingSpec",
]
