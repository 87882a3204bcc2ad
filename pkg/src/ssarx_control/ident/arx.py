"""Stage 1: high-order ARX estimation of the predictor Markov parameters."""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg

from ..models import ArxEstimate, StateSpaceModel, TrajectoryData
from .errors import IdentificationError

logger = logging.getLogger(__name__)


def _lagged(signal: np.ndarray, start: int, lag: int) -> np.ndarray:
    return signal[start - lag : signal.shape[0] - lag]


def fit_high_order_arx(
    traj: TrajectoryData,
    n_a: int,
    n_b: int,
    *,
    include_feedthrough: bool = False,
    rank_tol: float = 1e-10,
) -> ArxEstimate:
    """Least-squares fit of ``y(t)`` on ``y(t-1..t-n_a+1)`` and ``u(t-1..t-n_b+1)``.

    ``u(t)`` joins the regressor only with ``include_feedthrough``. Samples use
    ``t = max(n_a, n_b) .. N-1`` so no pre-sample data is padded.
    """

    if n_a < 1 or n_b < 1:
        raise IdentificationError(f"ARX orders must be positive, got n_a={n_a}, n_b={n_b}")

    n_y, n_u = traj.n_y, traj.n_u
    start = max(n_a, n_b)
    rows = traj.length - start
    u_lags = list(range(0 if include_feedthrough else 1, n_b))
    unknowns = n_y * (n_a - 1) + n_u * len(u_lags)
    if rows <= unknowns:
        raise IdentificationError(
            f"ARX({n_a},{n_b}) needs more than {unknowns} regression rows, "
            f"trajectory of {traj.length} samples gives {rows}"
        )

    columns = [_lagged(traj.y, start, lag) for lag in range(1, n_a)]
    columns += [_lagged(traj.u, start, lag) for lag in u_lags]
    regressor = np.hstack(columns) if columns else np.zeros((rows, 0))
    target = traj.y[start:]

    phi_y = np.zeros((n_a, n_y, n_y))
    phi_u = np.zeros((n_b, n_y, n_u))
    rank_deficient = False

    if unknowns:
        theta, _, rank, _ = scipy.linalg.lstsq(regressor, target, cond=rank_tol)
        rank_deficient = rank < unknowns
        if rank_deficient:
            logger.warning(
                "ARX regressor rank %d < %d unknowns, using minimum-norm solution",
                rank,
                unknowns,
            )
        coefficients = theta.T
        offset = 0
        for lag in range(1, n_a):
            phi_y[lag] = coefficients[:, offset : offset + n_y]
            offset += n_y
        for lag in u_lags:
            phi_u[lag] = coefficients[:, offset : offset + n_u]
            offset += n_u
        residual = target - regressor @ theta
    else:
        residual = target

    return ArxEstimate(
        phi_y=phi_y,
        phi_u=phi_u,
        residual_variance=residual.T @ residual / rows,
        rank_deficient=rank_deficient,
        samples=rows,
    )


def true_markov_parameters(model: StateSpaceModel, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact blocks ``phi_y,i = C At^(i-1) K`` and ``phi_u,j = C At^(j-1) Bt`` for lags < count."""

    if model.K is None:
        raise IdentificationError("true Markov parameters need the innovations gain K")
    if count < 1:
        raise IdentificationError(f"count must be at least 1, got {count}")

    a_tilde, b_tilde = model.a_tilde, model.b_tilde
    phi_y = np.zeros((count, model.n_y, model.n_y))
    phi_u = np.zeros((count, model.n_y, model.n_u))
    phi_u[0] = model.D

    power = np.eye(model.n)
    for lag in range(1, count):
        phi_y[lag] = model.C @ power @ model.K
        phi_u[lag] = model.C @ power @ b_tilde
        power = power @ a_tilde
    return phi_y, phi_u


def block_toeplitz(blocks: np.ndarray, l_f: int, *, include_diagonal: bool) -> np.ndarray:
    """Lower block-Toeplitz matrix with ``blocks[k]`` on the k-th block sub-diagonal."""

    rows, cols = blocks.shape[1], blocks.shape[2]
    matrix = np.zeros((rows * l_f, cols * l_f))
    first = 0 if include_diagonal else 1
    for i in range(l_f):
        for j in range(i + 1 - first):
            matrix[i * rows : (i + 1) * rows, j * cols : (j + 1) * cols] = blocks[i - j]
    return matrix


def assemble_toeplitz(arx: ArxEstimate, l_f: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(Phi_u, Phi_y)`` with the ARX blocks stacked on the sub-diagonals."""

    if l_f < 1:
        raise IdentificationError(f"future horizon must be positive, got {l_f}")
    if arx.n_a < l_f or arx.n_b < l_f:
        raise IdentificationError(
            f"ARX orders (n_a={arx.n_a}, n_b={arx.n_b}) must be at least L_f={l_f}"
        )
    phi_u_big = block_toeplitz(arx.phi_u[:l_f], l_f, include_diagonal=True)
    phi_y_big = block_toeplitz(arx.phi_y[:l_f], l_f, include_diagonal=False)
    return phi_u_big, phi_y_big


__all__ = [
    "assemble_toeplitz",
    "block_toeplitz",
    "fit_high_order_arx",
    "true_markov_parameters",
]
