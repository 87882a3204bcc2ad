"""Steady-state Kalman filter via fixed-point iteration of the Riccati recursion."""

from __future__ import annotations

import logging

import numpy as np

from ..models import NoiseConfig, StateSpaceModel

logger = logging.getLogger(__name__)


class RiccatiError(RuntimeError):
    """Raised when the Riccati iteration cannot produce a stabilizing solution."""


def filter_gain(model: StateSpaceModel, P: np.ndarray, sigma_v: np.ndarray) -> np.ndarray:
    """Measurement-update gain ``P C' (C P C' + Sigma_v)^-1``."""

    C = model.C
    S = C @ P @ C.T + np.atleast_2d(sigma_v)
    return np.linalg.solve(S, C @ P).T


def _riccati_step(
    model: StateSpaceModel, P: np.ndarray, sigma_w: np.ndarray, sigma_v: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    A = model.A
    gain = filter_gain(model, P, sigma_v)
    # predictor gain K = A P C' S^-1 is the filter gain pushed through A
    P_next = A @ (P - gain @ model.C @ P) @ A.T + sigma_w
    return 0.5 * (P_next + P_next.T), A @ gain


def solve_dare(
    model: StateSpaceModel,
    sigma_w: np.ndarray,
    sigma_v: np.ndarray,
    *,
    tol: float = 1e-10,
    max_iter: int = 100_000,
) -> tuple[np.ndarray, np.ndarray]:
    """Return the stabilizing prior covariance ``P`` and predictor gain ``K``.

    ``K`` is the innovations-form gain, so ``A - K C`` is the predictor state matrix.
    """

    Q = np.atleast_2d(np.asarray(sigma_w, dtype=float))
    R = np.atleast_2d(np.asarray(sigma_v, dtype=float))
    if Q.shape != (model.n, model.n) or R.shape != (model.n_y, model.n_y):
        raise RiccatiError(
            f"covariances must be {(model.n, model.n)} and {(model.n_y, model.n_y)}, "
            f"got {Q.shape} and {R.shape}"
        )
    if np.min(np.linalg.eigvalsh(R)) <= 0:
        raise RiccatiError("measurement noise covariance must be positive definite")

    P = Q.copy()
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        P_next, _ = _riccati_step(model, P, Q, R)
        residual = float(np.max(np.abs(P_next - P)))
        P = P_next
        if residual <= tol:
            break
    else:
        raise RiccatiError(
            f"Riccati iteration did not converge in {max_iter} steps (residual {residual:.3e})"
        )

    _, K = _riccati_step(model, P, Q, R)
    radius = model.with_gain(K).predictor_spectral_radius()
    if radius >= 1.0:
        raise RiccatiError(f"Riccati solution is not stabilizing (radius {radius:.4f})")

    logger.debug("Riccati iteration converged in %d steps (residual %.2e)", iteration, residual)
    return P, K


def innovations_model(model: StateSpaceModel, noise: NoiseConfig) -> StateSpaceModel:
    """Return ``model`` in innovations form with its steady-state Kalman gain.

    Without noise the gain is zero, which is the exact predictor of a noise-free plant.
    """

    if noise.is_noise_free:
        return model.with_noise(noise).with_gain(np.zeros((model.n, model.n_y)))
    _, K = solve_dare(
        model, noise.process_covariance(model.n), noise.measurement_covariance(model.n_y)
    )
    return model.with_noise(noise).with_gain(K)


__all__ = ["RiccatiError", "filter_gain", "innovations_model", "solve_dare"]
