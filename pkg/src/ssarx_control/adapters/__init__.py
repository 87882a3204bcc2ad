"""File adapters for trajectories and identified predictors."""

from .model_store import FORMAT_TAG, ModelStoreError, load_model, save_model
from .trajectory_csv import TrajectoryFormatError, read_trajectory, write_trajectory

__all__ = [
    "FORMAT_TAG",
    "ModelStoreError",
    "TrajectoryFormatError",
    "load_model",
    "read_trajectory",
    "save_model",
    "write_trajectory",
]
