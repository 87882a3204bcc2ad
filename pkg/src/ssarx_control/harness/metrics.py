"""Control cost and closed-loop bias/variance metrics."""

from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from ..control import weighted_tracking_cost
from ..models import ClosedLoopResult, Method, OutputBand, RunRecord, RunStatus
from .errors import ExperimentError

STATIONARY_WINDOW = (50, 100)


def control_cost(res: ClosedLoopResult, Q: object, R: object) -> float:
    """Tracking cost of a run on the measured outputs."""

    return weighted_tracking_cost(res.y, res.r, res.u, np.atleast_2d(Q), np.atleast_2d(R))


def stationary_error(
    res: ClosedLoopResult, window: tuple[int, int] = STATIONARY_WINDOW
) -> np.ndarray:
    """Time-averaged tracking error ``mean(y - r)`` over ``[start, stop)``, one per channel."""

    start, stop = window
    if not 0 <= start < stop <= res.length:
        raise ExperimentError(
            f"stationary window [{start}, {stop}) outside a run of {res.length} samples"
        )
    return np.mean(res.y[start:stop] - res.r[start:stop], axis=0)


def bias_variance(errors: Sequence[object] | np.ndarray) -> tuple[float, float]:
    """Return ``(||e_bar||^2, sum ||e_n - e_bar||^2 / (N - 1))`` over the runs."""

    samples = np.asarray(errors, dtype=float)
    if samples.ndim == 1:
        samples = samples.reshape(-1, 1)
    if samples.shape[0] < 2:
        raise ExperimentError(
            f"variance needs at least 2 Monte Carlo runs, got {samples.shape[0]}"
        )
    mean = samples.mean(axis=0)
    bias = float(mean @ mean)
    variance = float(np.sum((samples - mean) ** 2) / (samples.shape[0] - 1))
    return bias, variance


def output_bands(records: Iterable[RunRecord]) -> List[OutputBand]:
    """Mean and standard deviation of ``y(t)`` per (method, noise label, training length).

    Only successful runs that kept their test outputs contribute. The standard
    deviation uses ``N - 1`` and is NaN for a single run.
    """

    cells: Dict[Tuple[Method, str, int], List[np.ndarray]] = {}
    for record in records:
        if record.status is not RunStatus.OK or record.outputs is None:
            continue
        key = (record.method, record.noise_label, record.n_train)
        cells.setdefault(key, []).append(record.outputs)

    bands: List[OutputBand] = []
    for (method, label, n_train), outputs in cells.items():
        stacked = np.vstack(outputs)
        if len(outputs) >= 2:
            std = stacked.std(axis=0, ddof=1)
        else:
            std = np.full(stacked.shape[1], np.nan)
        bands.append(
            OutputBand(
                method=method,
                noise_label=label,
                n_train=n_train,
                runs=len(outputs),
                mean=stacked.mean(axis=0),
                std=std,
            )
        )
    return bands


__all__ = [
    "STATIONARY_WINDOW",
    "bias_variance",
    "control_cost",
    "output_bands",
    "stationary_error",
]
