"""Desk-scale Monte Carlo checks on the benchmark plant. Run with ``pytest -m slow``."""

from __future__ import annotations

import numpy as np
import pytest

from ssarx_control.config import BIAS_SWEEP_OVERLAY
from ssarx_control.harness import (
    emit_results,
    lookup_noise,
    reference_signal,
    run_bias_experiment,
    run_cost_experiment,
    run_method,
    summarize,
    training_trajectory,
)
from ssarx_control.ident import fit_high_order_arx, true_markov_parameters
from ssarx_control.models import Method, QpStatus
from ssarx_control.sim import innovations_model

pytestmark = pytest.mark.slow

NOISE = "20dB-group3"


def _markov_error(benchmark, make_training, n_samples: int, run_index: int) -> float:
    noise = lookup_noise(NOISE)
    phi_y, _ = true_markov_parameters(innovations_model(benchmark, noise), 15)
    traj = make_training(benchmark, noise, n_samples, run_index)
    arx = fit_high_order_arx(traj, 15, 15)
    return max(float(np.linalg.norm(arx.phi_y[i] - phi_y[i])) for i in range(1, 6))


def test_arx_markov_parameters_converge_with_data(benchmark, make_training):
    short = [_markov_error(benchmark, make_training, 500, seed) for seed in range(20)]
    long = [_markov_error(benchmark, make_training, 20000, seed) for seed in range(20)]

    assert np.median(long) < np.median(short)
    assert _markov_error(benchmark, make_training, 50000, 0) <= 0.05


def test_spc_bias_exceeds_ssarx_bias_on_closed_loop_data(loader):
    cfg = loader.load([BIAS_SWEEP_OVERLAY], overrides={"n_train": [200], "n_mc": 100})

    summaries = {s.method: s for s in summarize(run_bias_experiment(cfg).records)}

    spc = summaries[Method.SPC].bias
    assert spc > 2 * summaries[Method.SSARX].bias
    assert spc > 2 * summaries[Method.SSARX_LR].bias


def test_ssarx_bias_shrinks_with_training_length(loader):
    cfg = loader.load(
        [BIAS_SWEEP_OVERLAY],
        overrides={"n_train": [100, 1000], "n_mc": 100, "methods": ["ssarx"]},
    )

    by_length = {s.n_train: s.bias for s in summarize(run_bias_experiment(cfg).records)}

    assert by_length[1000] < by_length[100]


def test_cost_ordering_across_noise_levels(loader):
    cfg = loader.load(overrides={"n_mc": 100})

    summaries = summarize(run_cost_experiment(cfg).records)

    for label in cfg.noise:
        median = {s.method: s.median_cost for s in summaries if s.noise_label == label}
        assert median[Method.MPC_SSKF] <= median[Method.SSARX] <= median[Method.SPC]
        assert median[Method.SSARX_LR] == pytest.approx(median[Method.SSARX], rel=0.10)


def test_applied_inputs_respect_bounds(loader):
    cfg = loader.load()
    noise = lookup_noise("15dB-group3")
    r_test = reference_signal(cfg)

    for run_index in range(5):
        traj = training_trajectory(cfg, noise, 200, run_index)
        for method in cfg.methods:
            result = run_method(method, cfg, noise, traj, r_test, run_index)
            assert np.all(result.u >= cfg.u_min - 1e-9)
            assert np.all(result.u <= cfg.u_max + 1e-9)
            assert all(status is not QpStatus.INFEASIBLE for status in result.status)


def test_worker_pool_matches_serial_run(loader, fast_overrides, tmp_path):
    serial = loader.load(overrides=dict(fast_overrides, n_mc=4, noise=[NOISE]))
    pooled = serial.model_copy(update={"workers": 2})

    emit_results(run_cost_experiment(serial), tmp_path / "serial")
    emit_results(run_cost_experiment(pooled), tmp_path / "pooled")

    assert (tmp_path / "serial" / "runs.csv").read_bytes() == (
        tmp_path / "pooled" / "runs.csv"
    ).read_bytes()
