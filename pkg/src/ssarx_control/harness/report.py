"""CSV and JSON emission of Monte Carlo results and closed-loop runs."""

from __future__ import annotations

import csv
import json
import math
from collections import OrderedDict
from pathlib import Path
from typing import Iterable, Iterator, List, Sequence

import numpy as np

from ..models import (
    ClosedLoopResult,
    McResult,
    Method,
    MethodSummary,
    OutputBand,
    RunRecord,
    RunStatus,
)
from .errors import ExperimentError
from .metrics import bias_variance

RUN_COLUMNS = (
    "run_id",
    "seed",
    "method",
    "noise_label",
    "N_train",
    "J",
    "e_n",
    "J_clean",
    "J_minus_oracle",
    "softened_steps",
    "failed_steps",
    "violation_rate",
    "train_hash",
    "test_noise_hash",
    "status",
)
SUMMARY_COLUMNS = ("method", "noise_label", "N_train", "mean_J", "median_J", "Bias", "Var")
CLOSED_LOOP_COLUMNS = ("t", "r", "u", "y", "y0", "qp_status")
OUTPUT_BAND_COLUMNS = ("t", "method", "noise_label", "N_train", "runs", "mean_y", "std_y")

RUNS_FILE = "runs.csv"
SUMMARY_FILE = "summary.csv"
METADATA_FILE = "metadata.json"
OUTPUT_BAND_FILE = "output_band.csv"


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def summarize(records: Iterable[RunRecord]) -> List[MethodSummary]:
    """Aggregate successful runs per (method, noise label, training length).

    Cells keep first-seen order. Failed runs are excluded; with fewer than two
    successful runs the variance is NaN.
    """

    cells: "OrderedDict[tuple[Method, str, int], list[RunRecord]]" = OrderedDict()
    for record in records:
        cells.setdefault((record.method, record.noise_label, record.n_train), []).append(record)

    summaries: List[MethodSummary] = []
    for (method, label, n_train), cell in cells.items():
        ok = [record for record in cell if record.status is RunStatus.OK]
        costs = np.array([record.cost for record in ok], dtype=float)
        errors = np.array([record.error for record in ok], dtype=float)
        if len(ok) >= 2:
            bias, variance = bias_variance(errors)
        elif ok:
            bias, variance = float(errors[0] ** 2), math.nan
        else:
            bias, variance = math.nan, math.nan
        summaries.append(
            MethodSummary(
                method=method,
                noise_label=label,
                n_train=n_train,
                runs=len(ok),
                mean_cost=float(np.mean(costs)) if ok else math.nan,
                median_cost=float(np.median(costs)) if ok else math.nan,
                bias=bias,
                variance=variance,
            )
        )
    return summaries


def _run_row(record: RunRecord) -> list[str]:
    return [
        str(record.run_id),
        record.seed,
        record.method.value,
        record.noise_label,
        str(record.n_train),
        _fmt(record.cost),
        _fmt(record.error),
        _fmt(record.clean_cost),
        _fmt(record.cost_minus_oracle),
        str(record.softened_steps),
        str(record.failed_steps),
        _fmt(record.violation_rate),
        record.train_hash,
        record.test_noise_hash,
        record.status.value,
    ]


def _summary_row(summary: MethodSummary) -> list[str]:
    return [
        summary.method.value,
        summary.noise_label,
        str(summary.n_train),
        _fmt(summary.mean_cost),
        _fmt(summary.median_cost),
        _fmt(summary.bias),
        _fmt(summary.variance),
    ]


def _band_rows(bands: Iterable[OutputBand]) -> Iterator[list[str]]:
    for band in bands:
        for t in range(band.mean.shape[0]):
            yield [
                str(t),
                band.method.value,
                band.noise_label,
                str(band.n_train),
                str(band.runs),
                _fmt(band.mean[t]),
                _fmt(band.std[t]),
            ]


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    try:
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise ExperimentError(f"Failed to write {path}: {exc}") from exc
    return path


def emit_results(res: McResult, directory: Path | str) -> list[Path]:
    """Write ``runs.csv``, ``summary.csv`` and ``metadata.json`` into ``directory``.

    Results that carry output bands also get ``output_band.csv``.
    """

    target = Path(directory)
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ExperimentError(f"Failed to create output directory {target}: {exc}") from exc

    written = [
        _write_csv(target / RUNS_FILE, RUN_COLUMNS, (_run_row(r) for r in res.records)),
        _write_csv(
            target / SUMMARY_FILE,
            SUMMARY_COLUMNS,
            (_summary_row(s) for s in summarize(res.records)),
        ),
    ]
    if res.output_bands:
        written.append(
            _write_csv(target / OUTPUT_BAND_FILE, OUTPUT_BAND_COLUMNS, _band_rows(res.output_bands))
        )
    metadata_path = target / METADATA_FILE
    try:
        metadata_path.write_text(
            json.dumps(res.metadata, indent=2, sort_keys=True, default=str) + "\n",
            encoding="utf-8",
        )
    except OSError as exc:
        raise ExperimentError(f"Failed to write {metadata_path}: {exc}") from exc
    written.append(metadata_path)
    return written


def read_run_records(path: Path | str) -> List[RunRecord]:
    """Parse a per-run CSV written by :func:`emit_results`."""

    source = Path(path)
    try:
        with source.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if tuple(reader.fieldnames or ()) != RUN_COLUMNS:
                raise ExperimentError(f"Unexpected per-run header in {source}: {reader.fieldnames}")
            rows = list(reader)
    except OSError as exc:
        raise ExperimentError(f"Failed to read {source}: {exc}") from exc

    try:
        return [
            RunRecord(
                run_id=int(row["run_id"]),
                seed=row["seed"],
                method=Method(row["method"]),
                noise_label=row["noise_label"],
                n_train=int(row["N_train"]),
                cost=float(row["J"]),
                error=float(row["e_n"]),
                clean_cost=float(row["J_clean"]),
                cost_minus_oracle=float(row["J_minus_oracle"]),
                softened_steps=int(row["softened_steps"]),
                failed_steps=int(row["failed_steps"]),
                violation_rate=float(row["violation_rate"]),
                train_hash=row["train_hash"],
                test_noise_hash=row["test_noise_hash"],
                status=RunStatus(row["status"]),
            )
            for row in rows
        ]
    except (KeyError, ValueError) as exc:
        raise ExperimentError(f"Malformed per-run record in {source}: {exc}") from exc


def write_closed_loop_csv(res: ClosedLoopResult, path: Path | str) -> Path:
    """Write one closed-loop run as ``t, r, u, y, y0, qp_status`` (first channel of each)."""

    target = Path(path)
    rows = (
        [
            str(t),
            _fmt(res.r[t, 0]),
            _fmt(res.u[t, 0]),
            _fmt(res.y[t, 0]),
            _fmt(res.y_clean[t, 0]),
            res.status[t].value,
        ]
        for t in range(res.length)
    )
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ExperimentError(f"Failed to create {target.parent}: {exc}") from exc
    return _write_csv(target, CLOSED_LOOP_COLUMNS, rows)


__all__ = [
    "CLOSED_LOOP_COLUMNS",
    "METADATA_FILE",
    "OUTPUT_BAND_COLUMNS",
    "OUTPUT_BAND_FILE",
    "RUNS_FILE",
    "RUN_COLUMNS",
    "SUMMARY_COLUMNS",
    "SUMMARY_FILE",
    "emit_results",
    "read_run_records",
    "summarize",
    "write_closed_loop_csv",
]
