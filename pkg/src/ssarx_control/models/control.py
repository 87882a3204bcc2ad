"""Controller configuration, QP and closed-loop result models."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np


class ControllerConfigError(RuntimeError):
    """Raised when controller weights, bounds or horizons are inconsistent."""


class QpStatus(str, Enum):
    """Outcome of one receding-horizon solve."""

    OPTIMAL = "optimal"
    SOFTENED = "softened"
    INFEASIBLE = "infeasible"
    MAX_ITER = "max_iter"
    FAILED = "failed"


@dataclass(slots=True, frozen=True)
class ControllerConfig:
    """Weights and box constraints of the receding-horizon cost.

    ``Q`` and ``R`` are per-step weights; ``None`` bounds leave that side unconstrained.
    """

    Q: np.ndarray
    R: np.ndarray
    l_p: int
    l_f: int
    u_min: Optional[float] = -2.0
    u_max: Optional[float] = 2.0
    y_min: Optional[float] = -2.0
    y_max: Optional[float] = 2.0
    soft_penalty: float = 1e4
    qp_tolerance: float = 1e-8

    def __post_init__(self) -> None:
        Q = np.atleast_2d(np.asarray(self.Q, dtype=float))
        R = np.atleast_2d(np.asarray(self.R, dtype=float))
        if Q.shape[0] != Q.shape[1] or R.shape[0] != R.shape[1]:
            raise ControllerConfigError(f"Q and R must be square, got {Q.shape} and {R.shape}")
        if np.min(np.linalg.eigvalsh((Q + Q.T) / 2)) < -1e-12:
            raise ControllerConfigError("Q must be positive semidefinite")
        if np.min(np.linalg.eigvalsh((R + R.T) / 2)) <= 0:
            raise ControllerConfigError("R must be positive definite")
        for low, high, name in ((self.u_min, self.u_max, "u"), (self.y_min, self.y_max, "y")):
            if low is not None and high is not None and not low < high:
                raise ControllerConfigError(
                    f"{name} bounds must satisfy min < max, got [{low}, {high}]"
                )
        if self.l_p < 1 or self.l_f < 1:
            raise ControllerConfigError("horizons must be positive")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "R", R)

    @property
    def n_y(self) -> int:
        return self.Q.shape[0]

    @property
    def n_u(self) -> int:
        return self.R.shape[0]


@dataclass(slots=True)
class QpProblem:
    """Condensed QP ``min 0.5 x'Hx + f'x  s.t.  G x <= h``."""

    H: np.ndarray
    f: np.ndarray
    G: np.ndarray
    h: np.ndarray
    input_rows: int = 0
    output_rows: int = 0

    @property
    def dimension(self) -> int:
        return self.H.shape[0]

    def objective(self, x: np.ndarray) -> float:
        return float(0.5 * x @ self.H @ x + self.f @ x)


@dataclass(slots=True)
class QpSolution:
    """Primal/dual pair returned by the QP solver together with KKT residuals."""

    x: np.ndarray
    multipliers: np.ndarray
    status: QpStatus
    iterations: int = 0
    stationarity: float = 0.0
    primal_violation: float = 0.0
    complementarity: float = 0.0

    @property
    def succeeded(self) -> bool:
        return self.status in (QpStatus.OPTIMAL, QpStatus.SOFTENED)


@dataclass(slots=True)
class ClosedLoopResult:
    """One receding-horizon test run, arrays of length ``N_test``."""

    u: np.ndarray
    y: np.ndarray
    y_clean: np.ndarray
    r: np.ndarray
    status: List[QpStatus]
    cost: float = float("nan")
    clean_cost: float = float("nan")
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def length(self) -> int:
        return self.y.shape[0]

    @property
    def softened_steps(self) -> int:
        return sum(1 for status in self.status if status is QpStatus.SOFTENED)

    @property
    def failed_steps(self) -> int:
        return sum(1 for status in self.status if not _is_success(status))

    def output_violation_rate(self, y_min: float | None, y_max: float | None) -> float:
        """Fraction of measured outputs outside the output box."""

        outside = np.zeros(self.y.shape[0], dtype=bool)
        if y_min is not None:
            outside |= np.any(self.y < y_min, axis=1)
        if y_max is not None:
            outside |= np.any(self.y > y_max, axis=1)
        return float(np.mean(outside)) if outside.size else 0.0


def _is_success(status: QpStatus) -> bool:
    return status in (QpStatus.OPTIMAL, QpStatus.SOFTENED)
