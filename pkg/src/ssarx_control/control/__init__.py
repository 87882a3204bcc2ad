"""Receding-horizon QP, its solver and the closed control loop."""

from .horizon import DataDrivenHorizon, HorizonModel, KalmanHorizon, true_prediction_matrices
from .loop import mpc_sskf_run, receding_horizon_run, weighted_tracking_cost
from .qp import (
    ControlError,
    assemble_qp,
    build_qp,
    horizon_weight,
    soften_output_constraints,
)
from .solver import ActiveSetSolver, QpError, kkt_residuals, solve_qp

__all__ = [
    "ActiveSetSolver",
    "ControlError",
    "DataDrivenHorizon",
    "HorizonModel",
    "KalmanHorizon",
    "QpError",
    "assemble_qp",
    "build_qp",
    "horizon_weight",
    "kkt_residuals",
    "mpc_sskf_run",
    "receding_horizon_run",
    "soften_output_constraints",
    "solve_qp",
    "true_prediction_matrices",
    "weighted_tracking_cost",
]
