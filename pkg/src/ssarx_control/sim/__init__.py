"""Plant simulation, reference signals, random streams and the steady-state Kalman filter."""

from .benchmark import benchmark_model
from .kalman import RiccatiError, filter_gain, innovations_model, solve_dare
from .plant import (
    ClosedLoopUnstableError,
    SimulationError,
    collect_closed_loop,
    draw_plant_noise,
    feedback_matrix,
    simulate_innovations,
    simulate_plant,
)
from .signals import (
    SnrError,
    constant_reference,
    empirical_snr,
    sinusoid_reference,
    square_wave_reference,
)
from .streams import Stream, stream_generator, stream_hash, stream_seed

__all__ = [
    "ClosedLoopUnstableError",
    "RiccatiError",
    "SimulationError",
    "SnrError",
    "Stream",
    "benchmark_model",
    "collect_closed_loop",
    "constant_reference",
    "draw_plant_noise",
    "empirical_snr",
    "feedback_matrix",
    "filter_gain",
    "innovations_model",
    "simulate_innovations",
    "simulate_plant",
    "sinusoid_reference",
    "solve_dare",
    "square_wave_reference",
    "stream_generator",
    "stream_hash",
    "stream_seed",
]
