import numpy as np
import pytest

from ssarx_control.ident import IdentificationConfig, block_toeplitz, identify_ssarx
from ssarx_control.models import PredictorModel
from ssarx_control.predictor import PredictionError, condense, predict, predict_unrolled


def _random_model(l_p: int, l_f: int, n_u: int, n_y: int, seed: int) -> PredictorModel:
    rng = np.random.default_rng(seed)
    phi_u = 0.3 * rng.standard_normal((l_f, n_y, n_u))
    phi_u[0] = 0.0
    phi_y = 0.3 * rng.standard_normal((l_f, n_y, n_y))
    return PredictorModel(
        gamma_k=rng.standard_normal((n_y * l_f, (n_u + n_y) * l_p)),
        phi_u_big=block_toeplitz(phi_u, l_f, include_diagonal=True),
        phi_y_big=block_toeplitz(phi_y, l_f, include_diagonal=False),
        l_p=l_p,
        l_f=l_f,
        n_u=n_u,
        n_y=n_y,
    )


@pytest.mark.parametrize("dims", [(3, 4, 1, 1), (2, 5, 2, 3), (4, 1, 1, 2)])
def test_condensed_map_matches_unrolled_recursion(dims):
    model = _random_model(*dims, seed=sum(dims))
    l_p, l_f, n_u, n_y = dims
    rng = np.random.default_rng(1)
    z_p = rng.standard_normal((n_u + n_y) * l_p)
    u_f = rng.standard_normal(n_u * l_f)

    condensed = predict(condense(model), z_p, u_f)

    np.testing.assert_allclose(condensed, predict_unrolled(model, z_p, u_f), atol=1e-12)


def test_condensed_input_map_is_strictly_causal():
    cp = condense(_random_model(3, 6, 2, 2, seed=5))

    for row in range(cp.l_f):
        for col in range(row, cp.l_f):
            block = cp.P_u[row * 2 : (row + 1) * 2, col * 2 : (col + 1) * 2]
            assert np.all(block == 0)


@pytest.mark.parametrize("l_f", [1, 2, 5, 15])
def test_future_inputs_never_affect_earlier_predictions(noisy_training, l_f):
    cfg = IdentificationConfig(l_p=5, l_f=l_f, n_a=max(l_f, 5), n_b=max(l_f, 5))
    cp = condense(identify_ssarx(noisy_training, cfg))
    rng = np.random.default_rng(l_f)
    z_p = rng.standard_normal(2 * 5)
    u_f = rng.standard_normal(l_f)

    base = predict(cp, z_p, u_f)
    for k in range(l_f):
        bumped = u_f.copy()
        bumped[k] += 1.0
        changed = predict(cp, z_p, bumped)
        assert np.max(np.abs(changed[: k + 1] - base[: k + 1]), initial=0.0) <= 1e-14


def test_condensed_keeps_source_and_label():
    model = _random_model(2, 3, 1, 1, seed=2)

    cp = condense(model)

    assert cp.source is model
    assert cp.label == "ls"


def test_wrong_window_sizes_are_rejected():
    cp = condense(_random_model(2, 3, 1, 1, seed=3))

    with pytest.raises(PredictionError):
        predict(cp, np.zeros(3), np.zeros(3))
    with pytest.raises(PredictionError):
        predict(cp, np.zeros(4), np.zeros(2))
