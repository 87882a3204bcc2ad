import numpy as np
import pytest
import scipy.optimize

from ssarx_control.control import (
    ActiveSetSolver,
    QpError,
    assemble_qp,
    kkt_residuals,
    solve_qp,
    true_prediction_matrices,
)
from ssarx_control.control import solver as solver_module
from ssarx_control.models import QpProblem, QpStatus


def _box_qp(m: int, lower: np.ndarray, upper: np.ndarray, rng) -> QpProblem:
    M = rng.standard_normal((m, m))
    H = M.T @ M + m * np.eye(m)
    return QpProblem(
        H=H,
        f=3.0 * rng.standard_normal(m),
        G=np.vstack([np.eye(m), -np.eye(m)]),
        h=np.concatenate([upper, -lower]),
    )


def _projected_gradient(qp: QpProblem, lower, upper, iterations: int = 5000) -> np.ndarray:
    step = 1.0 / np.max(np.linalg.eigvalsh(qp.H))
    x = np.clip(np.zeros(qp.dimension), lower, upper)
    for _ in range(iterations):
        x = np.clip(x - step * (qp.H @ x + qp.f), lower, upper)
    return x


def _random_box(rng, m: int, contains_origin: bool):
    if contains_origin:
        return -rng.uniform(0.1, 2.0, m), rng.uniform(0.1, 2.0, m)
    lower = rng.uniform(0.5, 1.0, m)
    return lower, lower + rng.uniform(0.5, 1.0, m)


@pytest.mark.parametrize("seed", range(12))
def test_box_qps_match_projected_gradient_oracle(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 31))
    lower, upper = _random_box(rng, m, contains_origin=seed % 3 != 0)
    qp = _box_qp(m, lower, upper, rng)

    solution = solve_qp(qp)
    reference = _projected_gradient(qp, lower, upper)

    assert solution.status is QpStatus.OPTIMAL
    assert solution.stationarity <= 1e-6
    assert solution.primal_violation <= 1e-6
    assert solution.complementarity <= 1e-6
    objective = qp.objective(solution.x)
    assert objective == pytest.approx(qp.objective(reference), abs=1e-6 * (1 + abs(objective)))


def test_one_dimensional_clamp():
    qp = QpProblem(H=np.array([[2.0]]), f=np.array([-6.0]), G=np.array([[1.0]]), h=np.array([2.0]))

    solution = solve_qp(qp)

    assert solution.x[0] == pytest.approx(2.0)
    assert solution.multipliers[0] == pytest.approx(2.0)


def test_inactive_constraints_return_unconstrained_minimizer():
    rng = np.random.default_rng(3)
    qp = _box_qp(5, -100 * np.ones(5), 100 * np.ones(5), rng)

    solution = solve_qp(qp)

    np.testing.assert_allclose(solution.x, np.linalg.solve(qp.H, -qp.f), rtol=1e-10)
    assert solution.iterations == 0


def test_contradicting_constraints_are_infeasible():
    qp = QpProblem(
        H=np.eye(1), f=np.zeros(1), G=np.array([[1.0], [-1.0]]), h=np.array([-1.0, -1.0])
    )

    assert solve_qp(qp).status is QpStatus.INFEASIBLE


def test_indefinite_hessian_is_rejected():
    qp = QpProblem(H=-np.eye(2), f=np.zeros(2), G=np.eye(2), h=np.ones(2))

    with pytest.raises(QpError):
        solve_qp(qp)


def test_iteration_budget_is_enforced():
    rng = np.random.default_rng(5)
    m = 10
    qp = _box_qp(m, np.full(m, 0.5), np.full(m, 0.6), rng)

    with pytest.raises(QpError):
        ActiveSetSolver(max_iter=1).solve(qp)


def test_kkt_residuals_flag_negative_multipliers():
    qp = QpProblem(H=np.eye(1), f=np.zeros(1), G=np.eye(1), h=np.ones(1))

    stationarity, primal, complementarity = kkt_residuals(qp, np.zeros(1), np.array([-0.5]))

    assert stationarity == pytest.approx(0.5)
    assert primal == 0.0
    assert complementarity == pytest.approx(0.5)


def _general_qp(rng, m: int, dependent_rows: bool) -> QpProblem:
    M = rng.standard_normal((m, m))
    rows = int(rng.integers(1, 2 * m + 1))
    G = rng.standard_normal((rows, m))
    interior = rng.standard_normal(m)
    h = G @ interior + rng.uniform(0.0, 1.0, rows)
    if dependent_rows:
        # duplicated rows and sums of rows that are tight exactly where both parts are
        picks = rng.integers(0, rows, size=(3, 2))
        G = np.vstack([G, G[picks[:, 0]], G[picks[:, 0]] + G[picks[:, 1]]])
        h = np.concatenate([h, h[picks[:, 0]], h[picks[:, 0]] + h[picks[:, 1]]])
    return QpProblem(
        H=M.T @ M + np.eye(m), f=5.0 * rng.standard_normal(m), G=G, h=h
    )


def _slsqp_objective(qp: QpProblem) -> float:
    result = scipy.optimize.minimize(
        qp.objective,
        np.zeros(qp.dimension),
        jac=lambda x: qp.H @ x + qp.f,
        constraints={"type": "ineq", "fun": lambda x: qp.h - qp.G @ x, "jac": lambda x: -qp.G},
        method="SLSQP",
        options={"ftol": 1e-12, "maxiter": 1000},
    )
    return float(result.fun)


@pytest.mark.parametrize("seed", range(100))
def test_general_qps_satisfy_kkt_and_match_slsqp(seed):
    rng = np.random.default_rng(1000 + seed)
    m = int(rng.integers(2, 31))
    qp = _general_qp(rng, m, dependent_rows=seed % 3 == 0)

    solution = solve_qp(qp)

    assert solution.status is QpStatus.OPTIMAL
    assert solution.stationarity <= 1e-6
    assert solution.primal_violation <= 1e-6
    assert solution.complementarity <= 1e-6
    objective = qp.objective(solution.x)
    assert objective <= _slsqp_objective(qp) + 1e-6 * (1.0 + abs(objective))


def test_repeated_active_constraint_keeps_exact_multipliers():
    # minimize (x1 - 2)^2 + (x2 - 2)^2 with x1 <= 1 written three times
    qp = QpProblem(
        H=2.0 * np.eye(2),
        f=np.array([-4.0, -4.0]),
        G=np.array([[1.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0]]),
        h=np.array([1.0, 1.0, 2.0, 1.0]),
    )

    solution = solve_qp(qp)

    assert solution.status is QpStatus.OPTIMAL
    np.testing.assert_allclose(solution.x, [1.0, 1.0], atol=1e-10)
    assert solution.stationarity <= 1e-10
    assert np.count_nonzero(solution.multipliers[:3]) == 1


def test_optimal_status_requires_kkt_certificate(monkeypatch):
    rng = np.random.default_rng(8)
    qp = _general_qp(rng, 6, dependent_rows=True)
    assert ActiveSetSolver().solve(qp).status is QpStatus.OPTIMAL

    monkeypatch.setattr(solver_module, "kkt_residuals", lambda *args: (1.0, 0.0, 0.0))
    solution = ActiveSetSolver().solve(qp)

    assert solution.status is QpStatus.FAILED
    assert not solution.succeeded
    assert solution.stationarity == 1.0


@pytest.mark.parametrize("reference", [0.5, 3.0, -3.0])
def test_benchmark_controller_qps_match_slsqp(benchmark, controller, reference):
    observability, input_map = true_prediction_matrices(benchmark, controller.l_f)
    state = np.array([0.3, -0.4])
    qp = assemble_qp(
        observability @ state, input_map, np.full(controller.l_f, reference), controller
    )

    solution = solve_qp(qp)

    assert solution.status is QpStatus.OPTIMAL
    assert max(solution.stationarity, solution.primal_violation) <= 1e-6
    objective = qp.objective(solution.x)
    assert objective <= _slsqp_objective(qp) + 1e-6 * (1.0 + abs(objective))
    assert np.all(np.abs(solution.x) <= 2.0 + 1e-9)
