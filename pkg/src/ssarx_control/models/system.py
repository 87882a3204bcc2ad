"""System, noise and trajectory models shared by simulation and identification."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np


class ModelDimensionError(RuntimeError):
    """Raised when model matrices or trajectory arrays have inconsistent shapes."""


def _as_matrix(value: object, name: str) -> np.ndarray:
    array = np.atleast_2d(np.asarray(value, dtype=float))
    if array.ndim != 2:
        raise ModelDimensionError(f"{name} must be a matrix, got shape {array.shape}")
    return array


def _as_series(value: object, name: str) -> np.ndarray:
    array = np.asarray(value, dtype=float)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2:
        raise ModelDimensionError(f"{name} must be a (samples, channels) array, got {array.shape}")
    return array


@dataclass(slots=True, frozen=True)
class StateSpaceModel:
    """Discrete-time LTI system in plant or innovations form.

    ``K`` is only present for the innovations form. ``sigma_w`` and ``sigma_v`` are
    the standard deviations of the process and measurement noise of the plant form.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    K: Optional[np.ndarray] = None
    sigma_w: float = 0.0
    sigma_v: float = 0.0

    def __post_init__(self) -> None:
        A = _as_matrix(self.A, "A")
        B = _as_matrix(self.B, "B")
        C = _as_matrix(self.C, "C")
        D = _as_matrix(self.D, "D")

        n = A.shape[0]
        if A.shape != (n, n):
            raise ModelDimensionError(f"A must be square, got {A.shape}")
        if B.shape[0] != n:
            raise ModelDimensionError(f"B has {B.shape[0]} rows, expected {n}")
        if C.shape[1] != n:
            raise ModelDimensionError(f"C has {C.shape[1]} columns, expected {n}")
        if D.shape != (C.shape[0], B.shape[1]):
            raise ModelDimensionError(
                f"D must be {(C.shape[0], B.shape[1])}, got {D.shape}"
            )

        K = None
        if self.K is not None:
            K = _as_matrix(self.K, "K")
            if K.shape != (n, C.shape[0]):
                raise ModelDimensionError(f"K must be {(n, C.shape[0])}, got {K.shape}")

        if self.sigma_w < 0 or self.sigma_v < 0:
            raise ModelDimensionError("noise standard deviations must be non-negative")

        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "K", K)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def n_u(self) -> int:
        return self.B.shape[1]

    @property
    def n_y(self) -> int:
        return self.C.shape[0]

    @property
    def strictly_proper(self) -> bool:
        return not np.any(self.D)

    @property
    def a_tilde(self) -> np.ndarray:
        """Predictor-form state matrix ``A - K C``."""

        if self.K is None:
            return self.A
        return self.A - self.K @ self.C

    @property
    def b_tilde(self) -> np.ndarray:
        """Predictor-form input matrix ``B - K D``."""

        if self.K is None:
            return self.B
        return self.B - self.K @ self.D

    def predictor_spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvals(self.a_tilde))))

    def with_gain(self, K: np.ndarray) -> "StateSpaceModel":
        """Return a copy in innovations form with gain ``K``."""

        return replace(self, K=np.asarray(K, dtype=float))

    def with_noise(self, noise: "NoiseConfig") -> "StateSpaceModel":
        return replace(self, sigma_w=noise.sigma_w, sigma_v=noise.sigma_v)


@dataclass(slots=True, frozen=True)
class NoiseConfig:
    """Measurement/process noise pair realizing one signal-to-noise setting."""

    sigma_v: float
    sigma_w: float
    label: str = "custom"
    snr_db: Optional[int] = None
    group: Optional[int] = None

    def __post_init__(self) -> None:
        if self.sigma_v < 0 or self.sigma_w < 0:
            raise ModelDimensionError(
                f"noise standard deviations must be non-negative: {self.label}"
            )

    @property
    def is_noise_free(self) -> bool:
        return self.sigma_v == 0 and self.sigma_w == 0

    def process_covariance(self, n: int) -> np.ndarray:
        return self.sigma_w**2 * np.eye(n)

    def measurement_covariance(self, n_y: int) -> np.ndarray:
        return self.sigma_v**2 * np.eye(n_y)


NOISE_FREE = NoiseConfig(sigma_v=0.0, sigma_w=0.0, label="noise-free")


@dataclass(slots=True)
class TrajectoryData:
    """Recorded input/output samples, time-major: row ``t`` holds sample ``t``."""

    u: np.ndarray
    y: np.ndarray
    y_clean: Optional[np.ndarray] = None
    seed: Optional[Sequence[int] | int] = None
    w: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None
    x_final: Optional[np.ndarray] = None
    metadata: dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.u = _as_series(self.u, "u")
        self.y = _as_series(self.y, "y")
        if self.u.shape[0] != self.y.shape[0]:
            raise ModelDimensionError(
                f"u and y lengths differ: {self.u.shape[0]} != {self.y.shape[0]}"
            )
        if self.y_clean is not None:
            self.y_clean = _as_series(self.y_clean, "y_clean")
            if self.y_clean.shape != self.y.shape:
                raise ModelDimensionError(
                    f"y_clean shape {self.y_clean.shape} does not match y {self.y.shape}"
                )

    @property
    def length(self) -> int:
        return self.y.shape[0]

    @property
    def n_u(self) -> int:
        return self.u.shape[1]

    @property
    def n_y(self) -> int:
        return self.y.shape[1]

    def tail(self, count: int) -> "TrajectoryData":
        """Return the last ``count`` samples, keeping the terminal state."""

        if count > self.length:
            raise ModelDimensionError(f"cannot take {count} samples from {self.length}")
        start = self.length - count
        return TrajectoryData(
            u=self.u[start:],
            y=self.y[start:],
            y_clean=None if self.y_clean is None else self.y_clean[start:],
            seed=self.seed,
            x_final=self.x_final,
        )
