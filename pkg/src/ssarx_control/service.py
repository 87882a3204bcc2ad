"""Orchestration layer used by the CLI to run identification, control and experiments."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .adapters import load_model, read_trajectory, save_model, write_trajectory
from .config import BIAS_SWEEP_OVERLAY, ConfigLoader, ExperimentConfig
from .harness import (
    ExperimentError,
    emit_results,
    lookup_noise,
    reference_signal,
    run_bias_experiment,
    run_cost_experiment,
    run_method,
    training_trajectory,
    write_closed_loop_csv,
)
from .ident import identify_ssarx, residual_future, whitened_singular_values
from .models import (
    ClosedLoopResult,
    McResult,
    Method,
    PredictorModel,
    PredictorVariant,
    TrajectoryData,
)
from .predictor import condense, predict
from .stacking import build_hankels, stack_window


@dataclass(slots=True)
class IdentificationResult:
    """Identified predictor plus the optional singular-value profile used to pick a rank."""

    model: PredictorModel
    singular_values: np.ndarray | None = None
    metadata: Mapping[str, Any] = field(default_factory=dict)


@dataclass(slots=True)
class PredictionResult:
    """Multi-step prediction next to the measured future, when available."""

    y_hat: np.ndarray
    y_measured: np.ndarray | None
    anchor: int


ExperimentRunner = Callable[[ExperimentConfig], McResult]


class ExperimentService:
    """High level service behind the CLI subcommands."""

    def __init__(
        self,
        *,
        config_loader: ConfigLoader | None = None,
        cost_runner: ExperimentRunner | None = None,
        bias_runner: ExperimentRunner | None = None,
    ) -> None:
        self._config_loader = config_loader or ConfigLoader()
        self._cost_runner = cost_runner or run_cost_experiment
        self._bias_runner = bias_runner or run_bias_experiment

    # ------------------------------------------------------------------
    def load_config(
        self,
        config_files: Sequence[Path] | None = None,
        *,
        overrides: Mapping[str, Any] | None = None,
    ) -> ExperimentConfig:
        return self._config_loader.load(config_files, overrides=overrides)

    # ------------------------------------------------------------------
    def collect(
        self,
        output: Path,
        *,
        config_files: Sequence[Path] | None = None,
        noise_label: str = "20dB-group3",
        n_train: int | None = None,
        run_index: int = 0,
    ) -> TrajectoryData:
        """Simulate one closed-loop training experiment and write it as CSV."""

        cfg = self.load_config(config_files)
        noise = lookup_noise(noise_label)
        length = n_train if n_train is not None else cfg.n_train[0]
        traj = training_trajectory(cfg, noise, length, run_index)
        write_trajectory(traj, output)
        return traj

    # ------------------------------------------------------------------
    def identify(
        self,
        data_path: Path,
        output: Path | None = None,
        *,
        config_files: Sequence[Path] | None = None,
        low_rank: bool = False,
        show_singular_values: bool = False,
    ) -> IdentificationResult:
        """Fit an SSARX predictor on a trajectory file and optionally store it."""

        cfg = self.load_config(config_files)
        variant = PredictorVariant.LOW_RANK if low_rank else PredictorVariant.LS
        id_cfg = cfg.identification_config(variant)
        traj = read_trajectory(data_path)
        model = identify_ssarx(traj, id_cfg)

        singular = None
        if show_singular_values:
            hankels = build_hankels(traj, id_cfg.l_p, id_cfg.l_f)
            target = residual_future(hankels, model.phi_u_big, model.phi_y_big)
            singular = whitened_singular_values(
                target, hankels.Z_p, regularize=id_cfg.regularize
            )
        if output is not None:
            save_model(model, output)

        metadata = {"data": str(data_path), "samples": traj.length, "variant": model.variant_tag}
        return IdentificationResult(model=model, singular_values=singular, metadata=metadata)

    # ------------------------------------------------------------------
    def predict(self, model_path: Path, data_path: Path, anchor: int) -> PredictionResult:
        """Predict ``L_f`` outputs from the window of ``data_path`` anchored at ``anchor``."""

        model = load_model(model_path)
        traj = read_trajectory(data_path)
        window = stack_window(traj, anchor, model.l_p, model.l_f)
        y_hat = predict(condense(model), window.z_p, window.u_f)
        return PredictionResult(
            y_hat=y_hat.reshape(model.l_f, model.n_y),
            y_measured=window.y_f.reshape(model.l_f, model.n_y),
            anchor=anchor,
        )

    # ------------------------------------------------------------------
    def control(
        self,
        output: Path | None = None,
        *,
        config_files: Sequence[Path] | None = None,
        method: Method = Method.SSARX,
        noise_label: str = "20dB-group3",
        run_index: int = 0,
    ) -> ClosedLoopResult:
        """Single closed-loop test run on freshly collected training data."""

        cfg = self.load_config(config_files)
        noise = lookup_noise(noise_label)
        traj = training_trajectory(cfg, noise, cfg.n_train[0], run_index)
        result = run_method(method, cfg, noise, traj, reference_signal(cfg), run_index)
        if output is not None:
            write_closed_loop_csv(result, output)
        return result

    # ------------------------------------------------------------------
    def montecarlo(
        self,
        output_dir: Path,
        *,
        config_files: Sequence[Path] | None = None,
        experiment: str = "cost",
        full: bool = False,
        workers: int | None = None,
    ) -> McResult:
        """Run the cost or bias experiment and write its result files."""

        files = list(config_files or [])
        if experiment == "bias":
            files.insert(0, BIAS_SWEEP_OVERLAY)
        elif experiment != "cost":
            raise ExperimentError(f"experiment must be 'cost' or 'bias', got {experiment!r}")

        overrides: dict[str, Any] = {}
        if workers is not None:
            overrides["workers"] = workers
        cfg = self.load_config(files, overrides=overrides)
        if full:
            cfg = cfg.model_copy(update={"n_mc": cfg.full_n_mc})

        runner = self._bias_runner if experiment == "bias" else self._cost_runner
        result = runner(cfg)
        emit_results(result, output_dir)
        return result


__all__ = ["ExperimentService", "IdentificationResult", "PredictionResult"]
