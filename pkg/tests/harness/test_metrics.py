import math

import numpy as np
import pytest

from ssarx_control.harness import ExperimentError, bias_variance, control_cost, stationary_error
from ssarx_control.models import ClosedLoopResult, QpStatus


def _result(y, r, u) -> ClosedLoopResult:
    y = np.asarray(y, dtype=float).reshape(-1, 1)
    return ClosedLoopResult(
        u=np.asarray(u, dtype=float).reshape(-1, 1),
        y=y,
        y_clean=y.copy(),
        r=np.asarray(r, dtype=float).reshape(-1, 1),
        status=[QpStatus.OPTIMAL] * y.shape[0],
    )


def test_control_cost_hand_example():
    result = _result([1.0, 2.0], [0.0, 1.0], [2.0, 0.0])

    assert control_cost(result, 1.0, 0.01) == pytest.approx(2.04)


def test_stationary_error_averages_over_window():
    y = np.concatenate([np.zeros(50), np.full(50, 1.2)])
    result = _result(y, np.ones(100), np.zeros(100))

    assert stationary_error(result)[0] == pytest.approx(0.2)
    assert stationary_error(result, (0, 50))[0] == pytest.approx(-1.0)


def test_window_outside_run_is_rejected():
    result = _result(np.zeros(10), np.zeros(10), np.zeros(10))

    with pytest.raises(ExperimentError):
        stationary_error(result, (5, 20))


def test_constant_errors_have_no_variance():
    bias, variance = bias_variance([0.3, 0.3, 0.3])

    assert bias == pytest.approx(0.09)
    assert variance == pytest.approx(0.0, abs=1e-20)


def test_symmetric_errors_have_no_bias():
    bias, variance = bias_variance([1.0, -1.0])

    assert bias == 0.0
    assert variance == pytest.approx(2.0)


def test_large_sample_of_unit_gaussians():
    n = 100_000
    errors = np.random.default_rng(99).standard_normal(n)

    bias, variance = bias_variance(errors)

    assert bias <= 16.0 / n
    assert variance == pytest.approx(1.0, rel=0.02)


def test_single_run_has_no_variance_estimate():
    with pytest.raises(ExperimentError):
        bias_variance([0.1])


def test_vector_errors_use_squared_norm():
    bias, variance = bias_variance([[1.0, 1.0], [1.0, 1.0]])

    assert bias == pytest.approx(2.0)
    assert math.isclose(variance, 0.0)
