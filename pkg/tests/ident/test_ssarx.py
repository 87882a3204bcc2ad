import numpy as np
import pytest

from ssarx_control.harness import lookup_noise
from ssarx_control.ident import (
    CovarianceSource,
    ExcitationError,
    IdentificationConfig,
    IdentificationError,
    RankFallback,
    identify_ssarx,
    residual_future,
)
from ssarx_control.models import PredictorVariant
from ssarx_control.predictor import condense, predict
from ssarx_control.stacking import build_hankels, stack_window


def _config(**changes) -> IdentificationConfig:
    settings = dict(l_p=10, l_f=15, n_a=15, n_b=15)
    settings.update(changes)
    return IdentificationConfig(**settings)


def _relative_prediction_error(cp, traj) -> float:
    errors, outputs = [], []
    for anchor in range(cp.l_p, traj.length - cp.l_f + 1):
        window = stack_window(traj, anchor, cp.l_p, cp.l_f)
        errors.append(predict(cp, window.z_p, window.u_f) - window.y_f)
        outputs.append(window.y_f)
    return float(np.linalg.norm(errors) / np.linalg.norm(outputs))


def test_noise_free_predictor_is_exact_on_held_out_data(benchmark, make_open_loop):
    training = make_open_loop(benchmark, 2000, seed=10)
    held_out = make_open_loop(benchmark, 200, seed=11)

    model = identify_ssarx(training, _config(rank_fallback=RankFallback.MIN_NORM))

    assert _relative_prediction_error(condense(model), held_out) <= 1e-6


def test_noise_free_data_without_fallback_reports_poor_excitation(benchmark, make_open_loop):
    with pytest.raises(ExcitationError):
        identify_ssarx(make_open_loop(benchmark, 500, seed=12), _config())


def test_identified_blocks_have_causal_structure(noisy_training):
    model = identify_ssarx(noisy_training, _config())

    assert model.gamma_k.shape == (15, 20)
    assert np.all(np.triu(model.phi_y_big) == 0)
    # strictly proper plant: no lag-zero input block is estimated
    assert np.all(np.triu(model.phi_u_big) == 0)
    assert model.variant_tag == "ls"
    assert model.hyperparameters["samples"] == 200
    assert model.hyperparameters["hankel_columns"] == 200 - 10 - 15 + 1


@pytest.mark.parametrize("source", list(CovarianceSource))
def test_low_rank_variant_limits_past_to_future_rank(noisy_training, source):
    cfg = _config(variant=PredictorVariant.LOW_RANK, rank=2, covariance_source=source)

    model = identify_ssarx(noisy_training, cfg)

    assert np.linalg.matrix_rank(model.gamma_k, tol=1e-9 * np.abs(model.gamma_k).max()) <= 2
    assert model.variant_tag == "low_rank(2)"
    assert model.hyperparameters["covariance_source"] == source.value


def test_low_rank_fit_predicts_about_as_well_as_least_squares(
    benchmark, noisy_training, make_training
):
    ls = condense(identify_ssarx(noisy_training, _config()))
    low = condense(
        identify_ssarx(noisy_training, _config(variant=PredictorVariant.LOW_RANK, rank=2))
    )
    check = make_training(benchmark, lookup_noise("20dB-group3"), 200, run_index=1)

    assert _relative_prediction_error(low, check) < 1.5 * _relative_prediction_error(ls, check)


def test_orders_shorter_than_horizon_are_rejected():
    with pytest.raises(IdentificationError):
        _config(n_a=10)


def test_low_rank_needs_rank():
    with pytest.raises(IdentificationError):
        _config(variant=PredictorVariant.LOW_RANK)


def test_residual_future_removes_future_terms(noisy_training):
    hankels = build_hankels(noisy_training, 4, 3)
    rng = np.random.default_rng(3)
    phi_u = np.tril(rng.standard_normal((3, 3)), k=-1)
    phi_y = np.tril(rng.standard_normal((3, 3)), k=-1)

    target = residual_future(hankels, phi_u, phi_y)

    np.testing.assert_allclose(target, hankels.Y_f - phi_u @ hankels.U_f - phi_y @ hankels.Y_f)
    np.testing.assert_array_equal(
        residual_future(hankels, np.zeros((3, 3)), np.zeros((3, 3))), hankels.Y_f
    )
    with pytest.raises(IdentificationError):
        residual_future(hankels, np.zeros((3, 2)), phi_y)
