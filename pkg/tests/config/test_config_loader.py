from pathlib import Path

import numpy as np
import pytest

from ssarx_control.config import (
    BIAS_SWEEP_OVERLAY,
    ConfigError,
    ConfigLoader,
    NoiseSpec,
    deep_merge,
)
from ssarx_control.ident import CovarianceSource, RankFallback
from ssarx_control.models import Method, PredictorVariant


def write_config(tmp_path: Path, name: str, content: str) -> Path:
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    return path


def test_packaged_defaults_describe_the_benchmark(loader):
    cfg = loader.load()

    plant = cfg.plant_model()
    np.testing.assert_allclose(plant.C, [[0.0, 1.4142]])
    assert cfg.noise == ["30dB-group3", "25dB-group3", "20dB-group3", "15dB-group3"]
    assert (cfg.l_p, cfg.l_f, cfg.n_a, cfg.n_b) == (10, 15, 15, 15)
    assert cfg.methods == [Method.SPC, Method.SSARX, Method.SSARX_LR, Method.MPC_SSKF]
    assert cfg.reference.kind == "sinusoid"
    assert cfg.stationary_window == (50, 100)


def test_user_file_overrides_defaults_key_by_key(tmp_path, loader):
    override = write_config(
        tmp_path,
        "override.yaml",
        "n_mc: 7\nreference:\n  period: 25\nnoise:\n  - sigma_v: 0.01\n    sigma_w: 0.0\n",
    )

    cfg = loader.load([override])

    assert cfg.n_mc == 7
    assert cfg.reference.kind == "sinusoid"
    assert cfg.reference.period == 25
    assert cfg.noise == [NoiseSpec(sigma_v=0.01, sigma_w=0.0)]
    assert cfg.l_f == 15


def test_later_files_win(tmp_path, loader):
    first = write_config(
        tmp_path, "a.yaml", "n_test: 80\nstationary_window: [20, 60]\nmaster_seed: 1\n"
    )
    second = write_config(tmp_path, "b.yaml", "master_seed: 2\n")

    cfg = loader.load([first, second], overrides={"workers": 3})

    assert (cfg.n_test, cfg.master_seed, cfg.workers) == (80, 2, 3)


def test_bias_overlay_switches_to_constant_reference(loader):
    cfg = loader.load([BIAS_SWEEP_OVERLAY])

    assert cfg.reference.kind == "constant"
    assert cfg.n_train == [100, 200, 500, 1000]
    assert cfg.noise == ["20dB-group3"]


def test_unknown_key_is_rejected(tmp_path, loader):
    path = write_config(tmp_path, "typo.yaml", "n_mcc: 3\n")

    with pytest.raises(ConfigError) as excinfo:
        loader.load([path])

    assert "typo.yaml" in str(excinfo.value)


@pytest.mark.parametrize(
    "content",
    [
        "l_f: 20\n",
        "stationary_window: [50, 200]\n",
        "methods: []\n",
        "Q: [[1.0, 0.0], [0.0, 1.0]]\n",
        "plant:\n  D: [[0.0, 0.0]]\n",
        "n_train: [0]\n",
        "R: 0.0\n",
        "u_min: 3.0\n",
    ],
)
def test_inconsistent_settings_are_rejected(tmp_path, loader, content):
    path = write_config(tmp_path, "bad.yaml", content)

    with pytest.raises(ConfigError):
        loader.load([path])


def test_invalid_yaml_is_reported(tmp_path, loader):
    path = write_config(tmp_path, "broken.yaml", "n_mc: [1, 2\n")

    with pytest.raises(ConfigError):
        loader.load([path])


def test_non_mapping_document_is_reported(tmp_path, loader):
    path = write_config(tmp_path, "list.yaml", "- 1\n- 2\n")

    with pytest.raises(ConfigError):
        loader.load([path])


def test_missing_file_is_reported(tmp_path, loader):
    with pytest.raises(ConfigError):
        loader.load([tmp_path / "absent.yaml"])


def test_empty_defaults_require_a_plant(tmp_path):
    with pytest.raises(ConfigError):
        ConfigLoader(default_files=[]).load()


def test_duplicate_methods_collapse(loader):
    cfg = loader.load(overrides={"methods": ["ssarx", "spc", "ssarx"]})

    assert cfg.methods == [Method.SSARX, Method.SPC]


def test_deep_merge_merges_mappings_and_replaces_lists():
    base = {"a": {"b": 1, "c": [1, 2]}, "d": 1}

    merged = deep_merge(base, {"a": {"c": [3]}, "e": 2})

    assert merged == {"a": {"b": 1, "c": [3]}, "d": 1, "e": 2}
    assert base["a"]["c"] == [1, 2]


def test_derived_controller_and_identification_settings(loader):
    cfg = loader.load(overrides={"rank_fallback": "min_norm", "lr_covariance": "raw_future"})

    controller = cfg.controller_config()
    low_rank = cfg.identification_config(PredictorVariant.LOW_RANK)
    least_squares = cfg.identification_config()

    np.testing.assert_array_equal(controller.R, [[0.01]])
    assert (controller.u_min, controller.y_max) == (-2.0, 2.0)
    assert low_rank.rank == 2 and low_rank.regularize
    assert least_squares.rank is None and not least_squares.regularize
    assert least_squares.rank_fallback is RankFallback.MIN_NORM
    assert low_rank.covariance_source is CovarianceSource.RAW_FUTURE
