"""Primal active-set solver for strictly convex inequality-constrained QPs."""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg
import scipy.optimize

from ..models import QpProblem, QpSolution, QpStatus

logger = logging.getLogger(__name__)


class QpError(RuntimeError):
    """Raised when the QP solver exhausts its iteration budget or hits a singular system."""


def kkt_residuals(
    qp: QpProblem, x: np.ndarray, multipliers: np.ndarray
) -> tuple[float, float, float]:
    """Return (stationarity, primal violation, complementarity) in max-abs norm.

    Negative multipliers count towards the stationarity residual.
    """

    gradient = qp.H @ x + qp.f + qp.G.T @ multipliers
    stationarity = float(np.max(np.abs(gradient))) if gradient.size else 0.0
    if multipliers.size:
        stationarity = max(stationarity, float(np.max(-multipliers, initial=0.0)))
    slack = qp.G @ x - qp.h
    primal = float(np.max(slack, initial=0.0))
    complementarity = float(np.max(np.abs(multipliers * slack), initial=0.0))
    return stationarity, primal, complementarity


class ActiveSetSolver:
    """Solve ``min 0.5 x'Hx + f'x  s.t.  G x <= h`` with ``H`` positive definite.

    A strictly feasible start comes from a max-margin LP; the working set then grows
    with blocking constraints and shrinks by the most negative multiplier. Rows that
    depend linearly on the working set never enter it, so the equality-constrained
    subproblem stays nonsingular. A solution is reported optimal only when its KKT
    residuals are within ``kkt_tol`` (scaled by the problem data).
    """

    def __init__(self, *, tol: float = 1e-8, max_iter: int = 500, kkt_tol: float = 1e-6) -> None:
        self.tol = tol
        self.max_iter = max_iter
        self.kkt_tol = kkt_tol

    # ------------------------------------------------------------------
    def solve(self, qp: QpProblem) -> QpSolution:
        m = qp.dimension
        rows = qp.G.shape[0]
        try:
            factor = scipy.linalg.cho_factor(qp.H)
        except np.linalg.LinAlgError as exc:
            raise QpError("QP Hessian is not positive definite") from exc

        unconstrained = scipy.linalg.cho_solve(factor, -qp.f)
        if rows == 0 or np.all(qp.G @ unconstrained <= qp.h + self.tol):
            return self._finish(qp, unconstrained, np.zeros(rows), QpStatus.OPTIMAL, 0)

        start = self._feasible_start(qp)
        if start is None:
            return QpSolution(
                x=np.zeros(m), multipliers=np.zeros(rows), status=QpStatus.INFEASIBLE
            )
        return self._iterate(qp, start)

    # ------------------------------------------------------------------
    def _feasible_start(self, qp: QpProblem) -> np.ndarray | None:
        m = qp.dimension
        if np.all(qp.h >= 0):
            return np.zeros(m)

        # maximize the common margin t with G x + t <= h, t <= 1
        norms = np.maximum(np.linalg.norm(qp.G, axis=1), 1e-12)
        cost = np.zeros(m + 1)
        cost[-1] = -1.0
        result = scipy.optimize.linprog(
            cost,
            A_ub=np.hstack([qp.G, norms[:, None]]),
            b_ub=qp.h,
            bounds=[(None, None)] * m + [(None, 1.0)],
            method="highs",
        )
        if result.status == 2 or (result.success and result.x[-1] < -self.tol):
            return None
        if not result.success:
            raise QpError(f"phase-one LP failed: {result.message}")
        return result.x[:m]

    # ------------------------------------------------------------------
    def _iterate(self, qp: QpProblem, x: np.ndarray) -> QpSolution:
        rows = qp.G.shape[0]
        row_norms = np.linalg.norm(qp.G, axis=1)
        working: list[int] = []
        multipliers = np.zeros(rows)

        for iteration in range(1, self.max_iter + 1):
            step, lam = self._equality_step(qp, x, working)

            if np.max(np.abs(step)) <= self.tol * (1.0 + np.max(np.abs(x))):
                if not working or np.min(lam) >= -self.tol:
                    multipliers = np.zeros(rows)
                    multipliers[working] = np.maximum(lam, 0.0)
                    return self._finish(qp, x, multipliers, QpStatus.OPTIMAL, iteration)
                working.pop(int(np.argmin(lam)))
                continue

            directional = qp.G @ step
            floor = 1e-12 * row_norms * np.linalg.norm(step)
            candidates = [
                index
                for index in np.flatnonzero(directional > floor)
                if index not in working
            ]
            alpha, blocking = 1.0, None
            slack = qp.h - qp.G @ x
            for index in self._independent_rows(qp.G, working, candidates):
                ratio = max(slack[index], 0.0) / directional[index]
                if ratio < alpha:
                    alpha, blocking = ratio, int(index)
            x = x + alpha * step
            if blocking is not None:
                working.append(blocking)

        stationarity, primal, complementarity = kkt_residuals(qp, x, multipliers)
        raise QpError(
            f"active-set solver hit {self.max_iter} iterations "
            f"(stationarity {stationarity:.2e}, primal {primal:.2e}, "
            f"complementarity {complementarity:.2e})"
        )

    # ------------------------------------------------------------------
    @staticmethod
    def _independent_rows(
        G: np.ndarray, working: list[int], candidates: list[int]
    ) -> list[int]:
        if not working or not candidates:
            return candidates
        basis, _ = np.linalg.qr(G[working].T)
        rows = G[candidates]
        residual = rows - (rows @ basis) @ basis.T
        scale = np.maximum(np.linalg.norm(rows, axis=1), 1e-300)
        keep = np.linalg.norm(residual, axis=1) > 1e-9 * scale
        return [index for index, ok in zip(candidates, keep) if ok]

    # ------------------------------------------------------------------
    def _equality_step(
        self, qp: QpProblem, x: np.ndarray, working: list[int]
    ) -> tuple[np.ndarray, np.ndarray]:
        m, k = qp.dimension, len(working)
        gradient = qp.H @ x + qp.f
        A = qp.G[working]
        kkt = np.zeros((m + k, m + k))
        kkt[:m, :m] = qp.H
        kkt[:m, m:] = A.T
        kkt[m:, :m] = A
        rhs = np.concatenate([-gradient, np.zeros(k)])
        try:
            solution = scipy.linalg.solve(kkt, rhs, assume_a="sym")
        except np.linalg.LinAlgError as exc:
            raise QpError(f"singular KKT system for working set {working}") from exc
        return solution[:m], solution[m:]

    # ------------------------------------------------------------------
    def _finish(
        self,
        qp: QpProblem,
        x: np.ndarray,
        multipliers: np.ndarray,
        status: QpStatus,
        iterations: int,
    ) -> QpSolution:
        stationarity, primal, complementarity = kkt_residuals(qp, x, multipliers)
        if status is QpStatus.OPTIMAL:
            scale = 1.0 + max(
                float(np.max(np.abs(qp.f), initial=0.0)),
                float(np.max(np.abs(qp.h), initial=0.0)),
            )
            worst = max(stationarity, primal, complementarity)
            if worst > self.kkt_tol * scale:
                logger.warning(
                    "QP solution fails the KKT check (residual %.2e > %.2e)",
                    worst,
                    self.kkt_tol * scale,
                )
                status = QpStatus.FAILED
        return QpSolution(
            x=x,
            multipliers=multipliers,
            status=status,
            iterations=iterations,
            stationarity=stationarity,
            primal_violation=primal,
            complementarity=complementarity,
        )


def solve_qp(
    qp: QpProblem, tol: float = 1e-8, *, max_iter: int = 500, kkt_tol: float = 1e-6
) -> QpSolution:
    """Solve ``qp``; infeasibility is reported through ``QpStatus.INFEASIBLE``.

    ``QpStatus.OPTIMAL`` is only returned for points that pass the KKT check;
    otherwise the status is ``QpStatus.FAILED``.
    """

    return ActiveSetSolver(tol=tol, max_iter=max_iter, kkt_tol=kkt_tol).solve(qp)


__all__ = ["ActiveSetSolver", "QpError", "kkt_residuals", "solve_qp"]
