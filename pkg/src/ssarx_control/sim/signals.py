"""Reference signals and the signal-to-noise metric."""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .plant import SimulationError


class SnrError(SimulationError):
    """Raised when the signal power of the noise-free output is zero."""


def square_wave_reference(
    period: int,
    amplitude: float,
    jitter_var: float,
    n_samples: int,
    seed: Optional[int | Sequence[int]] = None,
) -> np.ndarray:
    """Square wave starting at ``+amplitude`` with Gaussian jitter of variance ``jitter_var``."""

    if period <= 0 or n_samples <= 0:
        raise SimulationError(f"period and length must be positive, got {period}, {n_samples}")
    if jitter_var < 0:
        raise SimulationError(f"jitter variance must be non-negative, got {jitter_var}")

    t = np.arange(n_samples)
    wave = np.where((t % period) < period / 2, amplitude, -amplitude).astype(float)
    if jitter_var > 0:
        rng = np.random.default_rng(seed)
        wave = wave + math.sqrt(jitter_var) * rng.standard_normal(n_samples)
    return wave


def sinusoid_reference(n_samples: int, period: float | None = None) -> np.ndarray:
    """``r(t) = sin(2 pi t / period)`` with the period defaulting to ``n_samples``."""

    if n_samples <= 0:
        raise SimulationError(f"length must be positive, got {n_samples}")
    cycle = float(period if period is not None else n_samples)
    return np.sin(2.0 * np.pi * np.arange(n_samples) / cycle)


def constant_reference(n_samples: int, value: float = 1.0) -> np.ndarray:
    if n_samples <= 0:
        raise SimulationError(f"length must be positive, got {n_samples}")
    return np.full(n_samples, float(value))


def empirical_snr(y_noisy: object, y_clean: object) -> float:
    """Return ``10 log10(P[y0] / P[y - y0])`` in dB, ``inf`` for noise-free data."""

    noisy = np.asarray(y_noisy, dtype=float)
    clean = np.asarray(y_clean, dtype=float)
    if noisy.shape != clean.shape:
        raise SimulationError(f"shape mismatch: {noisy.shape} vs {clean.shape}")

    signal_power = float(np.mean(clean**2))
    noise_power = float(np.mean((noisy - clean) ** 2))
    if signal_power == 0.0:
        raise SnrError("noise-free output has zero power")
    if noise_power == 0.0:
        return math.inf
    return 10.0 * math.log10(signal_power / noise_power)


__all__ = [
    "SnrError",
    "constant_reference",
    "empirical_snr",
    "sinusoid_reference",
    "square_wave_reference",
]
