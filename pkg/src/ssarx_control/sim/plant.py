"""Discrete-time LTI simulation in innovations and plant form, open and closed loop."""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from ..models import NoiseConfig, StateSpaceModel, TrajectoryData

logger = logging.getLogger(__name__)

SeedLike = Optional[int | Sequence[int]]


class SimulationError(RuntimeError):
    """Raised when a simulation is configured with inconsistent inputs."""


class ClosedLoopUnstableError(SimulationError):
    """Raised when the unit output feedback used for data collection is unstable."""


def _series(values: object, channels: int, name: str, length: int | None = None) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim == 1 and channels == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2 or array.shape[1] != channels:
        raise SimulationError(f"{name} must have {channels} channel(s), got shape {array.shape}")
    if length is not None and array.shape[0] != length:
        raise SimulationError(f"{name} has {array.shape[0]} samples, expected {length}")
    return array


def _initial_state(model: StateSpaceModel, x0: np.ndarray | None) -> np.ndarray:
    if x0 is None:
        return np.zeros(model.n)
    state = np.asarray(x0, dtype=float).reshape(-1)
    if state.shape != (model.n,):
        raise SimulationError(f"x0 must have {model.n} entries, got {state.shape}")
    return state


def _propagate(
    model: StateSpaceModel,
    u: np.ndarray,
    x0: np.ndarray,
    state_noise: np.ndarray | None,
    output_noise: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray]:
    A, B, C, D = model.A, model.B, model.C, model.D
    x = x0.copy()
    y = np.empty((u.shape[0], model.n_y))
    for t in range(u.shape[0]):
        y[t] = C @ x + D @ u[t]
        if output_noise is not None:
            y[t] += output_noise[t]
        x = A @ x + B @ u[t]
        if state_noise is not None:
            x += state_noise[t]
    return y, x


def simulate_innovations(
    model: StateSpaceModel,
    u_seq: object,
    e_seq: object,
    x0: np.ndarray | None = None,
) -> TrajectoryData:
    """Simulate ``x+ = A x + B u + K e``, ``y = C x + D u + e``.

    ``y_clean`` is the ``e = 0`` response from the same initial state.
    """

    u = _series(u_seq, model.n_u, "u")
    e = _series(e_seq, model.n_y, "e", length=u.shape[0])
    start = _initial_state(model, x0)
    K = model.K if model.K is not None else np.zeros((model.n, model.n_y))

    y, x_final = _propagate(model, u, start, e @ K.T, e)
    y_clean, _ = _propagate(model, u, start, None, None)
    return TrajectoryData(u=u, y=y, y_clean=y_clean, v=e, x_final=x_final)


def simulate_plant(
    model: StateSpaceModel,
    u_seq: object,
    w_seq: object,
    v_seq: object,
    x0: np.ndarray | None = None,
) -> TrajectoryData:
    """Simulate ``x+ = A x + B u + w``, ``y = C x + D u + v`` plus its noise-free twin."""

    u = _series(u_seq, model.n_u, "u")
    w = _series(w_seq, model.n, "w", length=u.shape[0])
    v = _series(v_seq, model.n_y, "v", length=u.shape[0])
    start = _initial_state(model, x0)

    y, x_final = _propagate(model, u, start, w, v)
    y_clean, _ = _propagate(model, u, start, None, None)
    return TrajectoryData(u=u, y=y, y_clean=y_clean, w=w, v=v, x_final=x_final)


def feedback_matrix(model: StateSpaceModel) -> np.ndarray:
    """State matrix of the loop closed by ``u = r - y``."""

    if model.n_u != model.n_y:
        raise SimulationError(
            f"unit feedback needs n_u == n_y, got n_u={model.n_u}, n_y={model.n_y}"
        )
    coupling = np.eye(model.n_y) + model.D
    return model.A - model.B @ np.linalg.solve(coupling, model.C)


def draw_plant_noise(
    model: StateSpaceModel, noise: NoiseConfig, n_samples: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw process noise then measurement noise, in that order."""

    w = noise.sigma_w * rng.standard_normal((n_samples, model.n))
    v = noise.sigma_v * rng.standard_normal((n_samples, model.n_y))
    return w, v


def collect_closed_loop(
    model: StateSpaceModel,
    r_train: object,
    noise: NoiseConfig,
    n_samples: int | None = None,
    seed: SeedLike = None,
    x0: np.ndarray | None = None,
) -> TrajectoryData:
    """Record a closed-loop trajectory under ``u(t) = r_train(t) - y(t)``."""

    closed = feedback_matrix(model)
    radius = float(np.max(np.abs(np.linalg.eigvals(closed))))
    if radius >= 1.0:
        raise ClosedLoopUnstableError(
            f"unit feedback loop is unstable (spectral radius {radius:.4f})"
        )

    r = _series(r_train, model.n_u, "r_train")
    if n_samples is not None:
        if n_samples > r.shape[0]:
            raise SimulationError(
                f"reference has {r.shape[0]} samples, {n_samples} requested"
            )
        r = r[:n_samples]
    length = r.shape[0]

    rng = np.random.default_rng(seed)
    w, v = draw_plant_noise(model, noise, length, rng)
    start = _initial_state(model, x0)

    u, y, x_final = _run_feedback(model, r, start, w, v)
    _, y_clean, _ = _run_feedback(model, r, start, None, None)

    logger.debug("collected %d closed-loop samples (%s)", length, noise.label)
    return TrajectoryData(
        u=u, y=y, y_clean=y_clean, seed=seed, w=w, v=v, x_final=x_final,
        metadata={"noise_label": noise.label},
    )


def _run_feedback(
    model: StateSpaceModel,
    r: np.ndarray,
    x0: np.ndarray,
    w: np.ndarray | None,
    v: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    A, B, C, D = model.A, model.B, model.C, model.D
    coupling = np.eye(model.n_y) + D
    x = x0.copy()
    u = np.empty_like(r)
    y = np.empty((r.shape[0], model.n_y))
    for t in range(r.shape[0]):
        measured = C @ x + D @ r[t]
        if v is not None:
            measured = measured + v[t]
        # (I + D) y = C x + D r + v once u = r - y is substituted
        y[t] = measured if model.strictly_proper else np.linalg.solve(coupling, measured)
        u[t] = r[t] - y[t]
        x = A @ x + B @ u[t]
        if w is not None:
            x += w[t]
    return u, y, x


__all__ = [
    "ClosedLoopUnstableError",
    "SimulationError",
    "collect_closed_loop",
    "draw_plant_noise",
    "feedback_matrix",
    "simulate_innovations",
    "simulate_plant",
]
