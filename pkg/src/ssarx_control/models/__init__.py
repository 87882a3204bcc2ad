"""Data models for systems, predictors, controllers and Monte Carlo records."""

from .control import (
    ClosedLoopResult,
    ControllerConfig,
    ControllerConfigError,
    QpProblem,
    QpSolution,
    QpStatus,
)
from .experiment import McResult, Method, MethodSummary, OutputBand, RunRecord, RunStatus
from .identification import ArxEstimate, CondensedPredictor, PredictorModel, PredictorVariant
from .system import (
    NOISE_FREE,
    ModelDimensionError,
    NoiseConfig,
    StateSpaceModel,
    TrajectoryData,
)

__all__ = [
    "ArxEstimate",
    "ClosedLoopResult",
    "CondensedPredictor",
    "ControllerConfig",
    "ControllerConfigError",
    "McResult",
    "Method",
    "MethodSummary",
    "ModelDimensionError",
    "OutputBand",
    "NOISE_FREE",
    "NoiseConfig",
    "PredictorModel",
    "PredictorVariant",
    "QpProblem",
    "QpSolution",
    "QpStatus",
    "RunRecord",
    "RunStatus",
    "StateSpaceModel",
    "TrajectoryData",
]
