"""Horizon models: what the receding-horizon loop asks a predictor at each step."""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import deque
from typing import Deque, Optional

import numpy as np

from ..ident import block_toeplitz
from ..models import CondensedPredictor, StateSpaceModel, TrajectoryData
from .qp import ControlError


class HorizonModel(ABC):
    """Stateful predictor ``y_f = free_response() + input_map u_f`` over ``l_f`` steps."""

    label: str = "horizon"

    @property
    @abstractmethod
    def input_map(self) -> np.ndarray:
        """Matrix mapping the stacked future inputs to the stacked future outputs."""

    @abstractmethod
    def reset(self, warmup: Optional[TrajectoryData]) -> None:
        """Initialise the predictor state from the samples preceding the run."""

    @abstractmethod
    def free_response(self) -> np.ndarray:
        """Predicted future outputs with zero future inputs."""

    @abstractmethod
    def observe(self, u: np.ndarray, y: np.ndarray) -> None:
        """Record the applied input and the measured output of the current step."""


class DataDrivenHorizon(HorizonModel):
    """Rolling past window feeding a condensed data-driven predictor."""

    def __init__(self, predictor: CondensedPredictor) -> None:
        self.predictor = predictor
        self.label = predictor.label
        self._u: Deque[np.ndarray] = deque(maxlen=predictor.l_p)
        self._y: Deque[np.ndarray] = deque(maxlen=predictor.l_p)

    @property
    def input_map(self) -> np.ndarray:
        return self.predictor.P_u

    def reset(self, warmup: Optional[TrajectoryData]) -> None:
        l_p = self.predictor.l_p
        self._u.clear()
        self._y.clear()
        if warmup is None:
            for _ in range(l_p):
                self._u.append(np.zeros(self.predictor.n_u))
                self._y.append(np.zeros(self.predictor.n_y))
            return
        if warmup.length < l_p:
            raise ControlError(f"warmup has {warmup.length} samples, L_p={l_p} required")
        for u, y in zip(warmup.u[-l_p:], warmup.y[-l_p:], strict=True):
            self.observe(u, y)

    def past_window(self) -> np.ndarray:
        return np.concatenate([np.concatenate(self._y), np.concatenate(self._u)])

    def free_response(self) -> np.ndarray:
        return self.predictor.P_z @ self.past_window()

    def observe(self, u: np.ndarray, y: np.ndarray) -> None:
        self._u.append(np.asarray(u, dtype=float).reshape(-1))
        self._y.append(np.asarray(y, dtype=float).reshape(-1))


def true_prediction_matrices(model: StateSpaceModel, l_f: int) -> tuple[np.ndarray, np.ndarray]:
    """Observability stack ``[C; CA; ...]`` and input Toeplitz ``[D, CB, CAB, ...]``."""

    blocks = np.zeros((l_f, model.n_y, model.n_u))
    blocks[0] = model.D
    rows = [model.C]
    power = np.eye(model.n)
    for lag in range(1, l_f):
        blocks[lag] = model.C @ power @ model.B
        power = power @ model.A
        rows.append(model.C @ power)
    return np.vstack(rows), block_toeplitz(blocks, l_f, include_diagonal=True)


class KalmanHorizon(HorizonModel):
    """Oracle predictor: true matrices propagated from a steady-state Kalman estimate.

    The state is the prior (predictor-form) estimate ``x_hat(t|t-1)``, updated with the
    innovations gain ``K`` after each measurement. No filtered ``x_hat(t|t)`` is formed,
    so the free response uses information up to ``y(t-1)`` only.
    """

    label = "mpc_sskf"

    def __init__(self, model: StateSpaceModel, l_f: int) -> None:
        if model.K is None:
            raise ControlError("oracle predictor needs the steady-state Kalman gain")
        self.model = model
        self.observability, self._input_map = true_prediction_matrices(model, l_f)
        self.state = np.zeros(model.n)

    @property
    def input_map(self) -> np.ndarray:
        return self._input_map

    def reset(self, warmup: Optional[TrajectoryData]) -> None:
        self.state = np.zeros(self.model.n)
        if warmup is not None:
            for u, y in zip(warmup.u, warmup.y, strict=True):
                self.observe(u, y)

    def free_response(self) -> np.ndarray:
        return self.observability @ self.state

    def observe(self, u: np.ndarray, y: np.ndarray) -> None:
        m = self.model
        u = np.asarray(u, dtype=float).reshape(-1)
        innovation = np.asarray(y, dtype=float).reshape(-1) - m.C @ self.state - m.D @ u
        self.state = m.A @ self.state + m.B @ u + m.K @ innovation


__all__ = ["DataDrivenHorizon", "HorizonModel", "KalmanHorizon", "true_prediction_matrices"]
