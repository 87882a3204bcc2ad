"""Seed derivation for independent Monte Carlo random streams.

Every stream is a PCG64 generator seeded with ``(master_seed, run_index, stream)``
through ``numpy.random.SeedSequence``, so runs are reproducible independently of
the order or process in which they execute.
"""

from __future__ import annotations

import hashlib
from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    TRAIN_REFERENCE = 0
    TRAIN_NOISE = 1
    TEST_NOISE = 2


def stream_seed(master_seed: int, run_index: int, stream: Stream) -> tuple[int, int, int]:
    return (int(master_seed), int(run_index), int(stream))


def stream_generator(master_seed: int, run_index: int, stream: Stream) -> np.random.Generator:
    return np.random.default_rng(stream_seed(master_seed, run_index, stream))


def stream_hash(*arrays: np.ndarray) -> str:
    """Short SHA-256 fingerprint of the raw bytes of ``arrays``."""

    digest = hashlib.sha256()
    for array in arrays:
        digest.update(np.ascontiguousarray(array, dtype=float).tobytes())
    return digest.hexdigest()[:16]


__all__ = ["Stream", "stream_generator", "stream_hash", "stream_seed"]
