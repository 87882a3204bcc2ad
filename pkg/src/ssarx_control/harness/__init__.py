"""Benchmark experiments: noise grid, Monte Carlo runs, metrics and result files."""

from .errors import ExperimentError, NoiseLookupError
from .experiments import (
    DOMAIN_ERRORS,
    PREDICTOR_BUILDERS,
    WorkItem,
    execute_work_item,
    reference_signal,
    run_bias_experiment,
    run_cost_experiment,
    run_method,
    training_trajectory,
)
from .metrics import (
    STATIONARY_WINDOW,
    bias_variance,
    control_cost,
    output_bands,
    stationary_error,
)
from .noise import lookup_noise, noise_grid, noise_label, resolve_noise
from .report import (
    CLOSED_LOOP_COLUMNS,
    OUTPUT_BAND_COLUMNS,
    RUN_COLUMNS,
    SUMMARY_COLUMNS,
    emit_results,
    read_run_records,
    summarize,
    write_closed_loop_csv,
)

__all__ = [
    "CLOSED_LOOP_COLUMNS",
    "DOMAIN_ERRORS",
    "ExperimentError",
    "NoiseLookupError",
    "OUTPUT_BAND_COLUMNS",
    "PREDICTOR_BUILDERS",
    "RUN_COLUMNS",
    "STATIONARY_WINDOW",
    "SUMMARY_COLUMNS",
    "WorkItem",
    "bias_variance",
    "control_cost",
    "emit_results",
    "execute_work_item",
    "lookup_noise",
    "noise_grid",
    "noise_label",
    "output_bands",
    "read_run_records",
    "reference_signal",
    "resolve_noise",
    "run_bias_experiment",
    "run_cost_experiment",
    "run_method",
    "stationary_error",
    "summarize",
    "training_trajectory",
    "write_closed_loop_csv",
]
