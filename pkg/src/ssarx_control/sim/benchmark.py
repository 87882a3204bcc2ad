"""Second-order benchmark plant used throughout the experiments."""

from __future__ import annotations

import numpy as np

from ..models import StateSpaceModel

BENCHMARK_A = ((0.7326, -0.0861), (0.1722, 0.9909))
BENCHMARK_B = ((0.0609,), (0.0064,))
BENCHMARK_C = ((0.0, 1.4142),)
BENCHMARK_D = ((0.0,),)


def benchmark_model(sigma_w: float = 0.0, sigma_v: float = 0.0) -> StateSpaceModel:
    return StateSpaceModel(
        A=np.array(BENCHMARK_A),
        B=np.array(BENCHMARK_B),
        C=np.array(BENCHMARK_C),
        D=np.array(BENCHMARK_D),
        sigma_w=sigma_w,
        sigma_v=sigma_v,
    )


__all__ = ["benchmark_model"]
