from pathlib import Path

import numpy as np
import pytest

from ssarx_control.adapters import FORMAT_TAG, ModelStoreError, load_model, save_model
from ssarx_control.ident import IdentificationConfig, identify_ssarx
from ssarx_control.models import PredictorVariant


def test_stored_model_reloads_bit_for_bit(tmp_path: Path, noisy_training):
    cfg = IdentificationConfig(
        l_p=10, l_f=15, n_a=15, n_b=15, variant=PredictorVariant.LOW_RANK, rank=2
    )
    model = identify_ssarx(noisy_training, cfg)

    path = save_model(model, tmp_path / "models" / "ssarx.txt")
    loaded = load_model(path)

    np.testing.assert_array_equal(loaded.gamma_k, model.gamma_k)
    np.testing.assert_array_equal(loaded.phi_u_big, model.phi_u_big)
    np.testing.assert_array_equal(loaded.phi_y_big, model.phi_y_big)
    assert loaded.variant is PredictorVariant.LOW_RANK
    assert loaded.rank == 2
    assert (loaded.l_p, loaded.l_f, loaded.n_u, loaded.n_y) == (10, 15, 1, 1)
    assert loaded.hyperparameters["samples"] == 200


def test_file_starts_with_format_tag(tmp_path: Path, noisy_training):
    model = identify_ssarx(noisy_training, IdentificationConfig(l_p=10, l_f=15, n_a=15, n_b=15))

    path = save_model(model, tmp_path / "m.txt")

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == f"# {FORMAT_TAG}"
    assert "# rank: none" in lines
    assert "[gamma_k] 15 20" in lines


def test_foreign_file_is_rejected(tmp_path: Path):
    path = tmp_path / "other.txt"
    path.write_text("hello\n", encoding="utf-8")

    with pytest.raises(ModelStoreError):
        load_model(path)


def test_missing_section_is_rejected(tmp_path: Path):
    path = tmp_path / "partial.txt"
    path.write_text(
        f"# {FORMAT_TAG}\n# variant: ls\n# rank: none\n# l_p: 1\n# l_f: 1\n"
        "# n_u: 1\n# n_y: 1\n[gamma_k] 1 2\n0.5 0.25\n",
        encoding="utf-8",
    )

    with pytest.raises(ModelStoreError) as excinfo:
        load_model(path)

    assert "phi_u_big" in str(excinfo.value)


def test_missing_file_is_rejected(tmp_path: Path):
    with pytest.raises(ModelStoreError):
        load_model(tmp_path / "absent.txt")
