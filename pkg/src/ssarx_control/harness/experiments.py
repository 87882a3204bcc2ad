"""Monte Carlo control-cost and bias/variance experiments on the benchmark loop."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Sequence

import numpy as np

from ..config import ExperimentConfig
from ..control import ControlError, QpError, mpc_sskf_run, receding_horizon_run
from ..ident import IdentificationError, identify_ssarx, spc_predictor
from ..models import (
    ClosedLoopResult,
    CondensedPredictor,
    McResult,
    Method,
    NoiseConfig,
    PredictorVariant,
    RunRecord,
    RunStatus,
    TrajectoryData,
)
from ..predictor import PredictionError, condense
from ..sim import (
    RiccatiError,
    SimulationError,
    Stream,
    collect_closed_loop,
    constant_reference,
    innovations_model,
    sinusoid_reference,
    square_wave_reference,
    stream_hash,
    stream_seed,
)
from ..stacking import StackingError, build_hankels
from .errors import ExperimentError
from .metrics import output_bands, stationary_error
from .noise import resolve_noise

logger = logging.getLogger(__name__)

DOMAIN_ERRORS = (
    SimulationError,
    RiccatiError,
    StackingError,
    IdentificationError,
    PredictionError,
    ControlError,
    QpError,
)

PredictorBuilder = Callable[[TrajectoryData, ExperimentConfig], CondensedPredictor]


def _build_spc(traj: TrajectoryData, cfg: ExperimentConfig) -> CondensedPredictor:
    return spc_predictor(build_hankels(traj, cfg.l_p, cfg.l_f), fallback=cfg.rank_fallback)


def _build_ssarx(traj: TrajectoryData, cfg: ExperimentConfig) -> CondensedPredictor:
    return condense(identify_ssarx(traj, cfg.identification_config(PredictorVariant.LS)))


def _build_ssarx_lr(traj: TrajectoryData, cfg: ExperimentConfig) -> CondensedPredictor:
    return condense(identify_ssarx(traj, cfg.identification_config(PredictorVariant.LOW_RANK)))


PREDICTOR_BUILDERS: Dict[Method, PredictorBuilder] = {
    Method.SPC: _build_spc,
    Method.SSARX: _build_ssarx,
    Method.SSARX_LR: _build_ssarx_lr,
}


@dataclass(slots=True, frozen=True)
class WorkItem:
    """One Monte Carlo run of every configured method at one noise point."""

    cfg: ExperimentConfig
    noise: NoiseConfig
    n_train: int
    run_index: int
    keep_outputs: bool = False


def reference_signal(cfg: ExperimentConfig) -> np.ndarray:
    """Reference sequence of length ``n_test`` described by ``cfg.reference``."""

    spec = cfg.reference
    if spec.kind == "constant":
        return constant_reference(cfg.n_test, spec.value)
    if spec.kind == "square_wave":
        period = int(spec.period) if spec.period else cfg.n_test
        return square_wave_reference(period, spec.amplitude, 0.0, cfg.n_test)
    return spec.amplitude * sinusoid_reference(cfg.n_test, spec.period)


def training_trajectory(
    cfg: ExperimentConfig, noise: NoiseConfig, n_train: int, run_index: int
) -> TrajectoryData:
    """Closed-loop square-wave experiment seeded from the run's own streams."""

    training = cfg.training
    r_train = square_wave_reference(
        training.period,
        training.amplitude,
        training.jitter_var,
        n_train,
        seed=stream_seed(cfg.master_seed, run_index, Stream.TRAIN_REFERENCE),
    )
    return collect_closed_loop(
        cfg.plant_model(),
        r_train,
        noise,
        seed=stream_seed(cfg.master_seed, run_index, Stream.TRAIN_NOISE),
    )


def run_method(
    method: Method,
    cfg: ExperimentConfig,
    noise: NoiseConfig,
    traj: TrajectoryData,
    r_test: np.ndarray,
    run_index: int,
) -> ClosedLoopResult:
    """Identify (or build the oracle for) ``method`` and run the test loop."""

    plant = cfg.plant_model()
    controller = cfg.controller_config()
    test_seed = stream_seed(cfg.master_seed, run_index, Stream.TEST_NOISE)
    if not method.data_driven:
        oracle = innovations_model(plant, noise)
        return mpc_sskf_run(
            plant, noise, r_test, controller, cfg.n_test, test_seed, warmup=traj, true_model=oracle
        )
    predictor = PREDICTOR_BUILDERS[method](traj, cfg)
    return receding_horizon_run(
        plant, noise, predictor, r_test, controller, cfg.n_test, test_seed, warmup=traj
    )


def _scalar_error(result: ClosedLoopResult, window: tuple[int, int]) -> float:
    error = stationary_error(result, window)
    if error.size != 1:
        raise ExperimentError(
            f"run records hold scalar tracking errors, plant has {error.size} outputs"
        )
    return float(error[0])


def execute_work_item(item: WorkItem) -> List[RunRecord]:
    """Run every method on one shared training set and test-noise realization."""

    cfg = item.cfg
    seed_tag = f"{cfg.master_seed}:{item.run_index}"
    try:
        traj = training_trajectory(cfg, item.noise, item.n_train, item.run_index)
    except DOMAIN_ERRORS as exc:
        logger.warning(
            "run %d (%s): training data failed: %s", item.run_index, item.noise.label, exc
        )
        return [
            RunRecord(
                run_id=item.run_index,
                seed=seed_tag,
                method=method,
                noise_label=item.noise.label,
                n_train=item.n_train,
                cost=math.nan,
                error=math.nan,
                status=RunStatus.FAILED,
            )
            for method in cfg.methods
        ]
    train_hash = stream_hash(traj.u, traj.y)
    r_test = reference_signal(cfg)
    controller = cfg.controller_config()

    # oracle first so every data-driven record can carry J - J(MPC-SSKF)
    ordered = sorted(cfg.methods, key=lambda method: method.data_driven)
    oracle_cost = math.nan
    records: Dict[Method, RunRecord] = {}
    for method in ordered:
        record = RunRecord(
            run_id=item.run_index,
            seed=seed_tag,
            method=method,
            noise_label=item.noise.label,
            n_train=item.n_train,
            cost=math.nan,
            error=math.nan,
            train_hash=train_hash,
        )
        try:
            result = run_method(method, cfg, item.noise, traj, r_test, item.run_index)
            record.cost = result.cost
            record.error = _scalar_error(result, cfg.stationary_window)
        except DOMAIN_ERRORS as exc:
            logger.warning(
                "run %d (%s, N_train=%d): %s failed: %s",
                item.run_index,
                item.noise.label,
                item.n_train,
                method.value,
                exc,
            )
            record.status = RunStatus.FAILED
        else:
            record.clean_cost = result.clean_cost
            record.softened_steps = result.softened_steps
            record.failed_steps = result.failed_steps
            record.violation_rate = result.output_violation_rate(
                controller.y_min, controller.y_max
            )
            record.test_noise_hash = str(result.metadata.get("test_noise_hash", ""))
            if item.keep_outputs:
                record.outputs = result.y[:, 0].copy()
            if not method.data_driven:
                oracle_cost = result.cost
        record.cost_minus_oracle = record.cost - oracle_cost
        records[method] = record

    return [records[method] for method in cfg.methods]


def _work_items(
    cfg: ExperimentConfig,
    noises: Sequence[NoiseConfig],
    n_train: Sequence[int],
    *,
    keep_outputs: bool = False,
) -> Iterator[WorkItem]:
    for length in n_train:
        for noise in noises:
            for run_index in range(cfg.n_mc):
                yield WorkItem(
                    cfg=cfg,
                    noise=noise,
                    n_train=length,
                    run_index=run_index,
                    keep_outputs=keep_outputs,
                )


def _execute(cfg: ExperimentConfig, items: List[WorkItem]) -> List[RunRecord]:
    records: List[RunRecord] = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for batch in pool.map(execute_work_item, items):
                records.extend(batch)
    else:
        for done, item in enumerate(items, start=1):
            records.extend(execute_work_item(item))
            if done % max(cfg.n_mc, 1) == 0:
                logger.info("completed %d/%d Monte Carlo runs", done, len(items))
    return records


def _metadata(cfg: ExperimentConfig, experiment: str) -> Dict[str, object]:
    return {
        "experiment": experiment,
        "master_seed": cfg.master_seed,
        "warmup": "training_tail",
        "config": cfg.model_dump(mode="json"),
    }


def run_cost_experiment(cfg: ExperimentConfig) -> McResult:
    """Control cost of every method across the configured noise points."""

    noises = resolve_noise(cfg.noise)
    items = list(_work_items(cfg, noises, cfg.n_train))
    logger.info(
        "cost experiment: %d noise point(s), %d run(s) each, methods %s",
        len(noises),
        cfg.n_mc,
        ", ".join(method.value for method in cfg.methods),
    )
    return McResult(records=_execute(cfg, items), metadata=_metadata(cfg, "cost"))


def run_bias_experiment(cfg: ExperimentConfig) -> McResult:
    """Stationary tracking error of every method for each training length."""

    if cfg.reference.kind != "constant":
        raise ExperimentError(
            f"bias experiment needs a constant reference, got {cfg.reference.kind!r}"
        )
    noises = resolve_noise(cfg.noise)
    items = list(_work_items(cfg, noises, cfg.n_train, keep_outputs=True))
    logger.info(
        "bias experiment: N_train sweep %s, %d run(s) per point",
        ", ".join(str(length) for length in cfg.n_train),
        cfg.n_mc,
    )
    records = _execute(cfg, items)
    return McResult(
        records=records, metadata=_metadata(cfg, "bias"), output_bands=output_bands(records)
    )


__all__ = [
    "DOMAIN_ERRORS",
    "PREDICTOR_BUILDERS",
    "WorkItem",
    "execute_work_item",
    "run_bias_experiment",
    "run_cost_experiment",
    "run_method",
    "reference_signal",
    "training_trajectory",
]
