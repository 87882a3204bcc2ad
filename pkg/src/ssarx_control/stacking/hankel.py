"""Stacked past/future vectors and block-Hankel data matrices."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..models import TrajectoryData


class StackingError(RuntimeError):
    """Raised when a window or Hankel request does not fit the trajectory."""


@dataclass(slots=True, frozen=True)
class StackedWindow:
    """Past/future stacks anchored at ``anchor`` (first future sample)."""

    y_p: np.ndarray
    u_p: np.ndarray
    y_f: np.ndarray
    u_f: np.ndarray
    anchor: int

    @property
    def z_p(self) -> np.ndarray:
        return np.concatenate([self.y_p, self.u_p])


@dataclass(slots=True, frozen=True)
class HankelSet:
    """Block-Hankel matrices whose column ``j`` is the window anchored at ``t0 + j``."""

    Y_p: np.ndarray
    Y_f: np.ndarray
    U_p: np.ndarray
    U_f: np.ndarray
    Z_p: np.ndarray
    t0: int
    l_p: int
    l_f: int

    @property
    def columns(self) -> int:
        return self.Y_f.shape[1]

    @property
    def n_y(self) -> int:
        return self.Y_f.shape[0] // self.l_f

    @property
    def n_u(self) -> int:
        return self.U_f.shape[0] // self.l_f

    def column(self, index: int) -> StackedWindow:
        return StackedWindow(
            y_p=self.Y_p[:, index].copy(),
            u_p=self.U_p[:, index].copy(),
            y_f=self.Y_f[:, index].copy(),
            u_f=self.U_f[:, index].copy(),
            anchor=self.t0 + index,
        )


def _check_horizons(l_p: int, l_f: int) -> None:
    if l_p < 1:
        raise StackingError(f"past horizon L_p must be at least 1, got {l_p}")
    if l_f < 1:
        raise StackingError(f"future horizon L_f must be at least 1, got {l_f}")


def stack_window(traj: TrajectoryData, t: int, l_p: int, l_f: int) -> StackedWindow:
    """Stack ``y(t-L_p..t-1)``, ``u(t-L_p..t-1)`` and ``y(t..t+L_f-1)``, ``u(t..)``."""

    _check_horizons(l_p, l_f)
    if t < l_p:
        raise StackingError(f"anchor {t} violates t >= L_p = {l_p}")
    if t + l_f > traj.length:
        raise StackingError(
            f"anchor {t} violates t + L_f <= length ({t} + {l_f} > {traj.length})"
        )
    return StackedWindow(
        y_p=traj.y[t - l_p : t].reshape(-1),
        u_p=traj.u[t - l_p : t].reshape(-1),
        y_f=traj.y[t : t + l_f].reshape(-1),
        u_f=traj.u[t : t + l_f].reshape(-1),
        anchor=t,
    )


def _block_hankel(signal: np.ndarray, first: int, rows: int, columns: int) -> np.ndarray:
    # rows of index grid are lags, columns are anchors; each sample stays contiguous
    index = first + np.arange(rows)[:, None] + np.arange(columns)[None, :]
    blocks = signal[index]
    return blocks.transpose(0, 2, 1).reshape(rows * signal.shape[1], columns)


def build_hankels(
    traj: TrajectoryData,
    l_p: int,
    l_f: int,
    t0: int | None = None,
    n_columns: int | None = None,
) -> HankelSet:
    """Build ``Y_p, Y_f, U_p, U_f, Z_p`` with the maximal column count by default."""

    _check_horizons(l_p, l_f)
    start = l_p if t0 is None else t0
    if start < l_p:
        raise StackingError(f"first anchor {start} violates t0 >= L_p = {l_p}")
    if traj.length < l_p + l_f:
        raise StackingError(
            f"trajectory has {traj.length} samples, at least L_p + L_f = {l_p + l_f} required"
        )

    available = traj.length - start - l_f + 1
    if available < 1:
        raise StackingError(
            f"trajectory has {traj.length} samples, at least {start + l_f} required for t0={start}"
        )
    columns = available if n_columns is None else n_columns
    if not 1 <= columns <= available:
        raise StackingError(f"requested {columns} columns, between 1 and {available} available")

    Y_p = _block_hankel(traj.y, start - l_p, l_p, columns)
    U_p = _block_hankel(traj.u, start - l_p, l_p, columns)
    Y_f = _block_hankel(traj.y, start, l_f, columns)
    U_f = _block_hankel(traj.u, start, l_f, columns)
    return HankelSet(
        Y_p=Y_p,
        Y_f=Y_f,
        U_p=U_p,
        U_f=U_f,
        Z_p=np.vstack([Y_p, U_p]),
        t0=start,
        l_p=l_p,
        l_f=l_f,
    )


def dump_hankels(hankels: HankelSet, directory: Path) -> list[Path]:
    """Write each Hankel matrix to ``<directory>/<name>.csv`` for inspection."""

    directory.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for name in ("Y_p", "Y_f", "U_p", "U_f", "Z_p"):
        path = directory / f"{name}.csv"
        try:
            np.savetxt(path, getattr(hankels, name), delimiter=",", fmt="%.17g")
        except OSError as exc:
            raise StackingError(f"failed to write Hankel dump {path}") from exc
        written.append(path)
    return written


__all__ = [
    "HankelSet",
    "StackedWindow",
    "StackingError",
    "build_hankels",
    "dump_hankels",
    "stack_window",
]
