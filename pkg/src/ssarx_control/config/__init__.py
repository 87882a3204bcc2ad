"""Experiment configuration: pydantic schema and layered YAML loading."""

from .loader import BIAS_SWEEP_OVERLAY, DEFAULT_CONFIG, ConfigError, ConfigLoader, deep_merge
from .schema import ExperimentConfig, NoiseSpec, PlantSpec, ReferenceSpec, TrainingSpec

__all__ = [
    "BIAS_SWEEP_OVERLAY",
    "DEFAULT_CONFIG",
    "ConfigError",
    "ConfigLoader",
    "ExperimentConfig",
    "NoiseSpec",
    "PlantSpec",
    "ReferenceSpec",
    "TrainingSpec",
    "deep_merge",
]
