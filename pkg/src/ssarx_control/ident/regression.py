"""Stage 2 regressions of the ARX-corrected future onto the past data."""

from __future__ import annotations

import logging
from enum import Enum

import numpy as np
import scipy.linalg

from .errors import ExcitationError, IdentificationError

logger = logging.getLogger(__name__)


class RankFallback(str, Enum):
    """What ``ls_regression`` does with a rank-deficient regressor."""

    NONE = "none"
    MIN_NORM = "min_norm"
    RIDGE = "ridge"


EIGEN_FLOOR = 1e-12


def _check_pair(target: np.ndarray, regressor: np.ndarray) -> None:
    if target.ndim != 2 or regressor.ndim != 2:
        raise IdentificationError("regression operands must be matrices")
    if target.shape[1] != regressor.shape[1]:
        raise IdentificationError(
            f"target has {target.shape[1]} columns, regressor has {regressor.shape[1]}"
        )


def ls_regression(
    target: np.ndarray,
    regressor: np.ndarray,
    *,
    fallback: RankFallback = RankFallback.NONE,
    rank_tol: float = 1e-10,
    ridge: float = 1e-8,
) -> np.ndarray:
    """Return ``M`` minimizing ``||target - M regressor||_F`` via an SVD least-squares solve."""

    _check_pair(target, regressor)
    rows = regressor.shape[0]
    singular = scipy.linalg.svdvals(regressor)
    largest = singular[0] if singular.size else 0.0
    rank = int(np.sum(singular > largest * rank_tol)) if largest > 0 else 0

    if rank < rows:
        message = (
            f"regressor has rank {rank} < {rows} rows over {regressor.shape[1]} samples "
            "(input not persistently exciting)"
        )
        if fallback is RankFallback.NONE:
            raise ExcitationError(message)
        logger.warning("%s, using %s fallback", message, fallback.value)

    if rank < rows and fallback is RankFallback.RIDGE:
        weight = np.sqrt(ridge) * max(largest, 1.0)
        stacked = np.vstack([regressor.T, weight * np.eye(rows)])
        rhs = np.vstack([target.T, np.zeros((rows, target.shape[0]))])
        solution, *_ = scipy.linalg.lstsq(stacked, rhs)
    else:
        solution, *_ = scipy.linalg.lstsq(regressor.T, target.T, cond=rank_tol)
    return solution.T


def _symmetric_roots(
    S: np.ndarray, *, regularize: bool, name: str
) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(S^1/2, S^-1/2)`` with eigenvalues floored at ``EIGEN_FLOOR * max``."""

    eigenvalues, vectors = scipy.linalg.eigh(0.5 * (S + S.T))
    top = float(np.max(eigenvalues)) if eigenvalues.size else 0.0
    if top <= 0:
        raise ExcitationError(f"{name} covariance is zero")
    floor = EIGEN_FLOOR * top
    if np.min(eigenvalues) < floor:
        if not regularize:
            raise ExcitationError(
                f"{name} covariance is near-singular "
                f"(eigenvalue ratio {np.min(eigenvalues) / top:.2e}); enable regularization"
            )
        eigenvalues = np.maximum(eigenvalues, floor)
    root = np.sqrt(eigenvalues)
    return (vectors * root) @ vectors.T, (vectors / root) @ vectors.T


def _whitened_cross(
    target: np.ndarray,
    regressor: np.ndarray,
    raw_future: np.ndarray | None,
    regularize: bool,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    _check_pair(target, regressor)
    outputs = target if raw_future is None else raw_future
    if outputs.shape != target.shape:
        raise IdentificationError(
            f"raw future block shape {outputs.shape} does not match target {target.shape}"
        )
    samples = regressor.shape[1]
    S_yy = outputs @ outputs.T / samples
    S_zz = regressor @ regressor.T / samples
    S_yz = outputs @ regressor.T / samples

    yy_root, yy_inv_root = _symmetric_roots(S_yy, regularize=regularize, name="output")
    _, zz_inv_root = _symmetric_roots(S_zz, regularize=regularize, name="past-data")
    return yy_inv_root @ S_yz @ zz_inv_root, yy_root, zz_inv_root


def whitened_singular_values(
    target: np.ndarray,
    regressor: np.ndarray,
    *,
    raw_future: np.ndarray | None = None,
    regularize: bool = False,
) -> np.ndarray:
    """Singular values of ``S_yy^-1/2 S_yz S_zz^-1/2`` for choosing the rank."""

    whitened, _, _ = _whitened_cross(target, regressor, raw_future, regularize)
    return scipy.linalg.svdvals(whitened)


def reduced_rank_regression(
    target: np.ndarray,
    regressor: np.ndarray,
    rank: int,
    *,
    raw_future: np.ndarray | None = None,
    regularize: bool = False,
) -> np.ndarray:
    """Rank-constrained estimate ``S_yy^1/2 U_r Sigma_r V_r' S_zz^-1/2``.

    The covariances use ``target`` unless ``raw_future`` (the unmodified ``Y_f``)
    is supplied.
    """

    limit = min(target.shape[0], regressor.shape[0])
    if not 1 <= rank <= limit:
        raise IdentificationError(f"rank must lie in [1, {limit}], got {rank}")

    whitened, yy_root, zz_inv_root = _whitened_cross(target, regressor, raw_future, regularize)
    U, singular, Vt = scipy.linalg.svd(whitened, full_matrices=False)
    return yy_root @ (U[:, :rank] * singular[:rank]) @ Vt[:rank] @ zz_inv_root


__all__ = [
    "EIGEN_FLOOR",
    "RankFallback",
    "ls_regression",
    "reduced_rank_regression",
    "whitened_singular_values",
]
