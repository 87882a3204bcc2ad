import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from ssarx_control.config import ConfigLoader  # noqa: E402
from ssarx_control.harness import lookup_noise  # noqa: E402
from ssarx_control.models import NOISE_FREE, ControllerConfig, StateSpaceModel  # noqa: E402
from ssarx_control.sim import (  # noqa: E402
    benchmark_model,
    collect_closed_loop,
    simulate_plant,
    square_wave_reference,
)


@pytest.fixture
def benchmark() -> StateSpaceModel:
    return benchmark_model()


@pytest.fixture
def controller() -> ControllerConfig:
    return ControllerConfig(Q=np.eye(1), R=0.01 * np.eye(1), l_p=10, l_f=15)


def closed_loop_training(model, noise, n_samples: int, run_index: int = 0):
    r_train = square_wave_reference(50, 2.0, 0.01, n_samples, seed=(7, run_index, 0))
    return collect_closed_loop(model, r_train, noise, seed=(7, run_index, 1))


@pytest.fixture
def make_training():
    return closed_loop_training


@pytest.fixture
def noisy_training(benchmark):
    return closed_loop_training(benchmark, lookup_noise("20dB-group3"), 200)


@pytest.fixture
def noise_free_training(benchmark):
    return closed_loop_training(benchmark, NOISE_FREE, 200)


def open_loop_noise_free(model, n_samples: int, seed: int):
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((n_samples, model.n_u))
    return simulate_plant(
        model, u, np.zeros((n_samples, model.n)), np.zeros((n_samples, model.n_y))
    )


@pytest.fixture
def make_open_loop():
    return open_loop_noise_free


@pytest.fixture
def fast_overrides() -> dict:
    """Small Monte Carlo settings that keep experiment tests quick."""

    return {"n_mc": 2, "n_test": 40, "stationary_window": [20, 40], "master_seed": 11}


@pytest.fixture
def loader() -> ConfigLoader:
    return ConfigLoader()
