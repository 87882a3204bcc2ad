"""Read and write input/output trajectories as CSV files."""

from __future__ import annotations

import csv
import os
from pathlib import Path
from typing import List

import numpy as np

from ..models import ModelDimensionError, TrajectoryData


class TrajectoryFormatError(RuntimeError):
    """Raised when a trajectory file is missing, unreadable or malformed."""


def _channel_names(prefix: str, count: int) -> List[str]:
    return [f"{prefix}_{index}" for index in range(1, count + 1)]


def write_trajectory(traj: TrajectoryData, path: str | os.PathLike[str]) -> Path:
    """Write ``t, u_1.., y_1.., [y0_1..]`` with one row per sample."""

    target = Path(path)
    header = ["t", *_channel_names("u", traj.n_u), *_channel_names("y", traj.n_y)]
    columns = [traj.u, traj.y]
    if traj.y_clean is not None:
        header.extend(_channel_names("y0", traj.n_y))
        columns.append(traj.y_clean)
    values = np.hstack(columns)

    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for t, row in enumerate(values):
                writer.writerow([str(t), *(format(float(x), ".17g") for x in row)])
    except OSError as exc:
        raise TrajectoryFormatError(f"Failed to write trajectory {target}: {exc}") from exc
    return target


def read_trajectory(path: str | os.PathLike[str]) -> TrajectoryData:
    """Load a trajectory written by :func:`write_trajectory` (or any file with that header)."""

    source = Path(path)
    if not source.exists():
        raise TrajectoryFormatError(f"Trajectory file not found: {source}")

    try:
        with source.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            rows = [row for row in reader if row]
    except OSError as exc:  # pragma: no cover - filesystem errors surfaced to caller
        raise TrajectoryFormatError(f"Failed to read trajectory {source}") from exc

    if not header or header[0] != "t":
        raise TrajectoryFormatError(f"Trajectory {source} must start with a 't' column")
    u_cols = [i for i, name in enumerate(header) if name.startswith("u_")]
    y_cols = [i for i, name in enumerate(header) if name.startswith("y_")]
    clean_cols = [i for i, name in enumerate(header) if name.startswith("y0_")]
    if not u_cols or not y_cols:
        raise TrajectoryFormatError(f"Trajectory {source} needs u_* and y_* columns")
    if not rows:
        raise TrajectoryFormatError(f"Trajectory {source} has no samples")

    try:
        values = np.array([[float(cell) for cell in row] for row in rows])
    except ValueError as exc:
        raise TrajectoryFormatError(f"Non-numeric value in trajectory {source}: {exc}") from exc
    if values.shape[1] != len(header):
        raise TrajectoryFormatError(f"Ragged rows in trajectory {source}")
    if not np.array_equal(values[:, 0], np.arange(values.shape[0])):
        raise TrajectoryFormatError(f"Trajectory {source} time index must run 0, 1, 2, ...")

    try:
        return TrajectoryData(
            u=values[:, u_cols],
            y=values[:, y_cols],
            y_clean=values[:, clean_cols] if clean_cols else None,
            metadata={"source": str(source)},
        )
    except ModelDimensionError as exc:
        raise TrajectoryFormatError(f"Inconsistent trajectory {source}: {exc}") from exc


__all__ = ["TrajectoryFormatError", "read_trajectory", "write_trajectory"]
