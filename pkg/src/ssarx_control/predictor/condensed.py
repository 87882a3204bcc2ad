"""Causal multi-step SSARX prediction and its condensed affine form."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from ..models import CondensedPredictor, PredictorModel


class PredictionError(RuntimeError):
    """Raised when prediction inputs do not match the predictor dimensions."""


def condense(model: PredictorModel) -> CondensedPredictor:
    """Solve ``(I - Phi_y) y_f = GK z_p + Phi_u u_f`` for ``P_z`` and ``P_u``.

    ``I - Phi_y`` is unit lower triangular, so a forward substitution suffices.
    """

    system = np.eye(model.phi_y_big.shape[0]) - model.phi_y_big

    def solve(rhs: np.ndarray) -> np.ndarray:
        return scipy.linalg.solve_triangular(system, rhs, lower=True, unit_diagonal=True)

    return CondensedPredictor(
        P_z=solve(model.gamma_k),
        P_u=solve(model.phi_u_big),
        l_p=model.l_p,
        l_f=model.l_f,
        n_u=model.n_u,
        n_y=model.n_y,
        label=model.variant_tag,
        source=model,
    )


def _check_inputs(
    l_p: int, l_f: int, n_u: int, n_y: int, z_p: np.ndarray, u_f: np.ndarray
) -> None:
    if z_p.shape != ((n_u + n_y) * l_p,):
        raise PredictionError(f"z_p must have {(n_u + n_y) * l_p} entries, got {z_p.shape}")
    if u_f.shape != (n_u * l_f,):
        raise PredictionError(f"u_f must have {n_u * l_f} entries, got {u_f.shape}")


def predict(cp: CondensedPredictor, z_p: object, u_f: object) -> np.ndarray:
    """``y_f = P_z z_p + P_u u_f``."""

    past = np.asarray(z_p, dtype=float).reshape(-1)
    future = np.asarray(u_f, dtype=float).reshape(-1)
    _check_inputs(cp.l_p, cp.l_f, cp.n_u, cp.n_y, past, future)
    return cp.P_z @ past + cp.P_u @ future


def predict_unrolled(model: PredictorModel, z_p: object, u_f: object) -> np.ndarray:
    """Evaluate the implicit predictor block row by block row."""

    past = np.asarray(z_p, dtype=float).reshape(-1)
    future = np.asarray(u_f, dtype=float).reshape(-1)
    _check_inputs(model.l_p, model.l_f, model.n_u, model.n_y, past, future)

    n_y = model.n_y
    driven = model.gamma_k @ past + model.phi_u_big @ future
    y_hat = np.zeros_like(driven)
    for i in range(model.l_f):
        rows = slice(i * n_y, (i + 1) * n_y)
        y_hat[rows] = driven[rows] + model.phi_y_big[rows, : i * n_y] @ y_hat[: i * n_y]
    return y_hat


__all__ = ["PredictionError", "condense", "predict", "predict_unrolled"]
