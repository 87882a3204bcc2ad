"""Measurement/process noise pairs realizing the benchmark signal-to-noise levels."""

from __future__ import annotations

from typing import Sequence

from ..config import NoiseSpec
from ..models import NoiseConfig
from .errors import NoiseLookupError

# (snr_db, group) -> (sigma_v, sigma_w) in units of 1e-2; group 1 has no process noise
_TABLE: dict[tuple[int, int], tuple[float, float]] = {
    (30, 1): (1.3, 0.0),
    (30, 2): (0.75, 0.187),
    (30, 3): (0.2, 0.25),
    (25, 1): (2.3, 0.0),
    (25, 2): (1.5, 0.37),
    (25, 3): (0.2, 0.50),
    (20, 1): (4.2, 0.0),
    (20, 2): (2.5, 0.62),
    (20, 3): (0.2, 0.89),
    (15, 1): (7.4, 0.0),
    (15, 2): (4.5, 1.13),
    (15, 3): (0.2, 1.37),
}


def noise_label(snr_db: int, group: int) -> str:
    return f"{snr_db}dB-group{group}"


def noise_grid() -> list[NoiseConfig]:
    """All twelve grid entries, ordered by decreasing SNR then group."""

    return [
        NoiseConfig(
            sigma_v=sigma_v * 1e-2,
            sigma_w=sigma_w * 1e-2,
            label=noise_label(snr, group),
            snr_db=snr,
            group=group,
        )
        for (snr, group), (sigma_v, sigma_w) in _TABLE.items()
    ]


def lookup_noise(label: str) -> NoiseConfig:
    for entry in noise_grid():
        if entry.label == label:
            return entry
    if label == "noise-free":
        return NoiseConfig(sigma_v=0.0, sigma_w=0.0, label="noise-free")
    known = ", ".join(entry.label for entry in noise_grid())
    raise NoiseLookupError(f"unknown noise label {label!r}; expected one of: {known}, noise-free")


def resolve_noise(entries: Sequence[str | NoiseSpec]) -> list[NoiseConfig]:
    """Turn configuration entries (grid labels or inline pairs) into noise configs."""

    return [
        lookup_noise(entry) if isinstance(entry, str) else entry.build() for entry in entries
    ]


__all__ = ["NoiseLookupError", "lookup_noise", "noise_grid", "noise_label", "resolve_noise"]
