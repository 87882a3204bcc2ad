"""Receding-horizon closed loop against the simulated plant."""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from ..models import (
    ClosedLoopResult,
    CondensedPredictor,
    ControllerConfig,
    NoiseConfig,
    QpStatus,
    StateSpaceModel,
    TrajectoryData,
)
from ..sim import draw_plant_noise, innovations_model, stream_hash
from .horizon import DataDrivenHorizon, HorizonModel, KalmanHorizon
from .qp import ControlError, assemble_qp, soften_output_constraints
from .solver import QpError, solve_qp

logger = logging.getLogger(__name__)

SeedLike = Optional[int | Sequence[int]]


def weighted_tracking_cost(
    y: np.ndarray, r: np.ndarray, u: np.ndarray, Q: np.ndarray, R: np.ndarray
) -> float:
    """``sum_t ||y(t) - r(t)||_Q^2 + ||u(t)||_R^2`` over time-major arrays."""

    error = np.asarray(y, dtype=float) - np.asarray(r, dtype=float)
    inputs = np.asarray(u, dtype=float)
    Q = np.atleast_2d(Q)
    R = np.atleast_2d(R)
    tracking = np.einsum("ti,ij,tj->", error, Q, error)
    effort = np.einsum("ti,ij,tj->", inputs, R, inputs)
    return float(tracking + effort)


def _reference_series(r_seq: object, n_y: int, n_test: int) -> np.ndarray:
    r = np.asarray(r_seq, dtype=float)
    if r.ndim == 1:
        r = r.reshape(-1, 1)
    if r.ndim != 2 or r.shape[1] != n_y:
        raise ControlError(f"reference must have {n_y} channel(s), got shape {r.shape}")
    if r.shape[0] < n_test:
        raise ControlError(f"reference has {r.shape[0]} samples, N_test={n_test} required")
    return r[:n_test]


def _reference_window(r: np.ndarray, t: int, l_f: int) -> np.ndarray:
    index = np.minimum(np.arange(t, t + l_f), r.shape[0] - 1)
    return r[index].reshape(-1)


def _clip_inputs(values: np.ndarray, cfg: ControllerConfig) -> np.ndarray:
    low = -np.inf if cfg.u_min is None else cfg.u_min
    high = np.inf if cfg.u_max is None else cfg.u_max
    return np.clip(values, low, high)


def _fallback_plan(previous: np.ndarray | None, decisions: int, n_u: int) -> np.ndarray:
    if previous is None:
        return np.zeros(decisions)
    return np.concatenate([previous[n_u:], previous[-n_u:]])


def _plan_step(
    horizon: HorizonModel,
    r_window: np.ndarray,
    cfg: ControllerConfig,
    previous: np.ndarray | None,
    step: int,
) -> tuple[np.ndarray, QpStatus]:
    qp = assemble_qp(horizon.free_response(), horizon.input_map, r_window, cfg)
    decisions = qp.dimension
    try:
        solution = solve_qp(qp, cfg.qp_tolerance)
        if solution.status is QpStatus.INFEASIBLE:
            softened = solve_qp(
                soften_output_constraints(qp, cfg.soft_penalty), cfg.qp_tolerance
            )
            if softened.succeeded:
                logger.info("step %d: output constraints softened", step)
                return softened.x[:decisions], QpStatus.SOFTENED
            solution = softened
        if solution.succeeded:
            return solution.x, QpStatus.OPTIMAL
        logger.warning(
            "step %d: QP returned %s, applying fallback input", step, solution.status.value
        )
        status = QpStatus.FAILED
    except QpError as exc:
        logger.warning("step %d: %s; applying fallback input", step, exc)
        status = QpStatus.MAX_ITER
    return _clip_inputs(_fallback_plan(previous, decisions, cfg.n_u), cfg), status


def receding_horizon_run(
    plant: StateSpaceModel,
    noise: NoiseConfig,
    predictor: CondensedPredictor | HorizonModel,
    r_seq: object,
    cfg: ControllerConfig,
    n_test: int,
    seed: SeedLike = None,
    warmup: Optional[TrajectoryData] = None,
) -> ClosedLoopResult:
    """Run ``n_test`` receding-horizon steps and apply only the first planned input.

    The plant starts from ``warmup.x_final`` when a warmup trajectory is given, so the
    initial past window is the tail of the data the plant actually produced.
    """

    horizon = (
        DataDrivenHorizon(predictor) if isinstance(predictor, CondensedPredictor) else predictor
    )
    if n_test < 1:
        raise ControlError(f"N_test must be positive, got {n_test}")
    if plant.n_u != cfg.n_u or plant.n_y != cfg.n_y:
        raise ControlError(
            f"plant has n_u={plant.n_u}, n_y={plant.n_y}; controller expects "
            f"n_u={cfg.n_u}, n_y={cfg.n_y}"
        )
    r = _reference_series(r_seq, plant.n_y, n_test)

    rng = np.random.default_rng(seed)
    w, v = draw_plant_noise(plant, noise, n_test, rng)

    x = np.zeros(plant.n)
    if warmup is not None and warmup.x_final is not None:
        x = np.asarray(warmup.x_final, dtype=float).copy()
    x_clean = x.copy()
    horizon.reset(warmup)

    A, B, C, D = plant.A, plant.B, plant.C, plant.D
    u_log = np.zeros((n_test, plant.n_u))
    y_log = np.zeros((n_test, plant.n_y))
    y_clean = np.zeros((n_test, plant.n_y))
    statuses: list[QpStatus] = []
    plan: np.ndarray | None = None

    for t in range(n_test):
        plan, status = _plan_step(horizon, _reference_window(r, t, cfg.l_f), cfg, plan, t)
        statuses.append(status)
        u = _clip_inputs(plan[: plant.n_u], cfg)

        y = C @ x + D @ u + v[t]
        y_clean[t] = C @ x_clean + D @ u
        u_log[t], y_log[t] = u, y
        horizon.observe(u, y)

        x = A @ x + B @ u + w[t]
        x_clean = A @ x_clean + B @ u

    result = ClosedLoopResult(
        u=u_log,
        y=y_log,
        y_clean=y_clean,
        r=r,
        status=statuses,
        cost=weighted_tracking_cost(y_log, r, u_log, cfg.Q, cfg.R),
        clean_cost=weighted_tracking_cost(y_clean, r, u_log, cfg.Q, cfg.R),
        metadata={
            "method": horizon.label,
            "noise_label": noise.label,
            "warmup": "training_tail" if warmup is not None else "zeros",
            "test_noise_hash": stream_hash(w, v),
        },
    )
    if result.softened_steps or result.failed_steps:
        logger.info(
            "%s run: %d softened and %d failed steps",
            horizon.label,
            result.softened_steps,
            result.failed_steps,
        )
    return result


def mpc_sskf_run(
    plant: StateSpaceModel,
    noise: NoiseConfig,
    r_seq: object,
    cfg: ControllerConfig,
    n_test: int,
    seed: SeedLike = None,
    warmup: Optional[TrajectoryData] = None,
    true_model: Optional[StateSpaceModel] = None,
) -> ClosedLoopResult:
    """Oracle baseline: true matrices with a steady-state Kalman state estimate."""

    oracle = true_model if true_model is not None else innovations_model(plant, noise)
    return receding_horizon_run(
        plant, noise, KalmanHorizon(oracle, cfg.l_f), r_seq, cfg, n_test, seed, warmup
    )


__all__ = ["mpc_sskf_run", "receding_horizon_run", "weighted_tracking_cost"]
