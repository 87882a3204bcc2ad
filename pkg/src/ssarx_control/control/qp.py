"""Condensed receding-horizon QP with input and output box constraints."""

from __future__ import annotations

import numpy as np

from ..models import CondensedPredictor, ControllerConfig, QpProblem


class ControlError(RuntimeError):
    """Raised when a controller cannot be configured or run."""


SLACK_CURVATURE = 1e-6


def horizon_weight(weight: np.ndarray, l_f: int) -> np.ndarray:
    """Block-diagonal expansion of a per-step weight over the horizon."""

    return np.kron(np.eye(l_f), weight)


def _box_rows(
    mapping: np.ndarray, offset: np.ndarray, low: float | None, high: float | None
) -> tuple[np.ndarray, np.ndarray]:
    rows, rhs = [], []
    if high is not None:
        rows.append(mapping)
        rhs.append(high - offset)
    if low is not None:
        rows.append(-mapping)
        rhs.append(offset - low)
    if not rows:
        return np.zeros((0, mapping.shape[1])), np.zeros(0)
    return np.vstack(rows), np.concatenate(rhs)


def assemble_qp(
    free_response: np.ndarray,
    input_map: np.ndarray,
    r_window: np.ndarray,
    cfg: ControllerConfig,
) -> QpProblem:
    """Build the QP for ``y_f = free_response + input_map u_f``."""

    free = np.asarray(free_response, dtype=float).reshape(-1)
    reference = np.asarray(r_window, dtype=float).reshape(-1)
    outputs, decisions = input_map.shape
    if free.shape != (outputs,) or reference.shape != (outputs,):
        raise ControlError(
            f"free response {free.shape} and reference {reference.shape} "
            f"must both have {outputs} entries"
        )
    if outputs != cfg.n_y * cfg.l_f or decisions != cfg.n_u * cfg.l_f:
        raise ControlError(
            f"input map {input_map.shape} does not match horizon {cfg.l_f} "
            f"with n_y={cfg.n_y}, n_u={cfg.n_u}"
        )

    Q_bar = horizon_weight(cfg.Q, cfg.l_f)
    R_bar = horizon_weight(cfg.R, cfg.l_f)
    H = 2.0 * (input_map.T @ Q_bar @ input_map + R_bar)
    f = 2.0 * input_map.T @ Q_bar @ (free - reference)

    G_u, h_u = _box_rows(np.eye(decisions), np.zeros(decisions), cfg.u_min, cfg.u_max)
    G_y, h_y = _box_rows(input_map, free, cfg.y_min, cfg.y_max)
    return QpProblem(
        H=0.5 * (H + H.T),
        f=f,
        G=np.vstack([G_u, G_y]),
        h=np.concatenate([h_u, h_y]),
        input_rows=G_u.shape[0],
        output_rows=G_y.shape[0],
    )


def build_qp(
    cp: CondensedPredictor, z_p: np.ndarray, r_window: np.ndarray, cfg: ControllerConfig
) -> QpProblem:
    """QP for the data-driven predictor at past window ``z_p``."""

    past = np.asarray(z_p, dtype=float).reshape(-1)
    if past.shape != (cp.P_z.shape[1],):
        raise ControlError(f"z_p must have {cp.P_z.shape[1]} entries, got {past.shape}")
    return assemble_qp(cp.P_z @ past, cp.P_u, r_window, cfg)


def soften_output_constraints(qp: QpProblem, penalty: float) -> QpProblem:
    """Append one slack per output row with an L1 penalty.

    The decision vector becomes ``[u_f; s]``; a small curvature on ``s`` keeps the
    Hessian positive definite.
    """

    decisions, slacks = qp.dimension, qp.output_rows
    G_in = qp.G[: qp.input_rows]
    G_out = qp.G[qp.input_rows :]
    curvature = SLACK_CURVATURE * max(float(np.max(np.diag(qp.H))), 1.0)

    H = np.zeros((decisions + slacks, decisions + slacks))
    H[:decisions, :decisions] = qp.H
    H[decisions:, decisions:] = curvature * np.eye(slacks)
    G = np.vstack(
        [
            np.hstack([G_in, np.zeros((G_in.shape[0], slacks))]),
            np.hstack([G_out, -np.eye(slacks)]),
            np.hstack([np.zeros((slacks, decisions)), -np.eye(slacks)]),
        ]
    )
    return QpProblem(
        H=H,
        f=np.concatenate([qp.f, penalty * np.ones(slacks)]),
        G=G,
        h=np.concatenate([qp.h, np.zeros(slacks)]),
        input_rows=qp.input_rows,
        output_rows=slacks,
    )


__all__ = [
    "ControlError",
    "assemble_qp",
    "build_qp",
    "horizon_weight",
    "soften_output_constraints",
]
