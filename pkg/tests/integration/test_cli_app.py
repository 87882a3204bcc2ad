"""Integration tests for the ``ssarx-dpc`` command line."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import pytest

from ssarx_control.cli import app
from ssarx_control.harness import ExperimentError
from ssarx_control.models import McResult, Method, RunRecord


class StubService:
    def __init__(self, error: Exception | None = None) -> None:
        self.error = error
        self.calls: list[dict[str, Any]] = []

    def montecarlo(self, output_dir: Path, **kwargs: Any) -> McResult:
        self.calls.append({"output_dir": output_dir, **kwargs})
        if self.error is not None:
            raise self.error
        record = RunRecord(
            run_id=0,
            seed="1:0",
            method=Method.SSARX,
            noise_label="20dB-group3",
            n_train=200,
            cost=3.5,
            error=0.02,
        )
        return McResult(records=[record], metadata={"experiment": "cost"})


@pytest.fixture
def small_config(tmp_path: Path) -> Path:
    path = tmp_path / "small.yaml"
    path.write_text(
        "n_test: 40\nstationary_window: [20, 40]\nn_train: [200]\n", encoding="utf-8"
    )
    return path


def test_noisegrid_lists_every_label(capsys) -> None:
    exit_code = app.main(["noisegrid"])

    out = capsys.readouterr().out
    assert exit_code == 0
    for label in ("30dB-group1", "20dB-group3", "15dB-group2"):
        assert label in out


def test_montecarlo_forwards_options(monkeypatch, tmp_path: Path, capsys) -> None:
    stub = StubService()
    monkeypatch.setattr(app, "create_service", lambda: stub)

    exit_code = app.main(
        ["montecarlo", str(tmp_path), "--experiment", "bias", "--full", "--workers", "2"]
    )

    assert exit_code == 0
    assert stub.calls == [
        {
            "output_dir": tmp_path,
            "config_files": None,
            "experiment": "bias",
            "full": True,
            "workers": 2,
        }
    ]
    assert "ssarx" in capsys.readouterr().out


def test_domain_errors_exit_with_code_two(monkeypatch, tmp_path: Path, capsys) -> None:
    monkeypatch.setattr(
        app, "create_service", lambda: StubService(ExperimentError("nothing to run"))
    )

    exit_code = app.main(["montecarlo", str(tmp_path)])

    assert exit_code == 2
    assert "Error: nothing to run" in capsys.readouterr().out


def test_missing_command_prints_help(capsys) -> None:
    exit_code = app.main([])

    assert exit_code == 0
    assert "usage:" in capsys.readouterr().out


def test_unknown_noise_label_is_reported(tmp_path: Path, capsys) -> None:
    exit_code = app.main(["collect", str(tmp_path / "t.csv"), "--noise", "40dB"])

    assert exit_code == 2
    assert "unknown noise label" in capsys.readouterr().out
    assert not (tmp_path / "t.csv").exists()


def test_missing_model_file_is_reported(tmp_path: Path, capsys) -> None:
    data = tmp_path / "t.csv"
    data.write_text("t,u_1,y_1\n0,0,0\n", encoding="utf-8")

    exit_code = app.main(["predict", str(tmp_path / "absent.txt"), str(data), "--anchor", "0"])

    assert exit_code == 2
    assert "Error:" in capsys.readouterr().out


def test_collect_identify_predict_round_trip(tmp_path: Path, small_config: Path, capsys) -> None:
    data = tmp_path / "train.csv"
    model_file = tmp_path / "model.txt"

    assert app.main(["collect", str(data), "--config", str(small_config)]) == 0
    assert (
        app.main(
            [
                "identify",
                str(data),
                "--config",
                str(small_config),
                "--output",
                str(model_file),
                "--show-singular-values",
            ]
        )
        == 0
    )
    assert app.main(["predict", str(model_file), str(data), "--anchor", "50"]) == 0

    out = capsys.readouterr().out
    assert "Wrote 200 samples" in out
    assert "Whitened singular values" in out
    assert "Prediction at anchor 50" in out
    assert model_file.exists()


def test_control_writes_closed_loop_csv(tmp_path: Path, small_config: Path, capsys) -> None:
    output = tmp_path / "loop.csv"

    exit_code = app.main(
        [
            "control",
            "--config",
            str(small_config),
            "--method",
            "mpc_sskf",
            "--output",
            str(output),
        ]
    )

    assert exit_code == 0
    assert output.read_text(encoding="utf-8").startswith("t,")
    assert "J=" in capsys.readouterr().out
