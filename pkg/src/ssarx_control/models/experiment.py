"""Monte Carlo record models shared by the harness and the reporting layer."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np


class Method(str, Enum):
    """Predictive controllers compared by the experiments."""

    SPC = "spc"
    SSARX = "ssarx"
    SSARX_LR = "ssarx_lr"
    MPC_SSKF = "mpc_sskf"

    @property
    def data_driven(self) -> bool:
        return self is not Method.MPC_SSKF


class RunStatus(str, Enum):
    OK = "ok"
    FAILED = "failed"


@dataclass(slots=True)
class RunRecord:
    """Outcome of one method on one Monte Carlo run."""

    run_id: int
    seed: str
    method: Method
    noise_label: str
    n_train: int
    cost: float
    error: float
    clean_cost: float = float("nan")
    cost_minus_oracle: float = float("nan")
    softened_steps: int = 0
    failed_steps: int = 0
    violation_rate: float = 0.0
    train_hash: str = ""
    test_noise_hash: str = ""
    status: RunStatus = RunStatus.OK
    outputs: Optional[np.ndarray] = None


@dataclass(slots=True)
class MethodSummary:
    """Aggregate statistics of one (method, noise, training length) cell."""

    method: Method
    noise_label: str
    n_train: int
    runs: int
    mean_cost: float
    median_cost: float
    bias: float
    variance: float


@dataclass(slots=True)
class OutputBand:
    """Per-sample mean and standard deviation of the test output across runs."""

    method: Method
    noise_label: str
    n_train: int
    runs: int
    mean: np.ndarray
    std: np.ndarray


@dataclass(slots=True)
class McResult:
    """Raw per-run records plus the configuration echo of the experiment."""

    records: List[RunRecord] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    output_bands: List[OutputBand] = field(default_factory=list)

    def for_method(self, method: Method) -> List[RunRecord]:
        return [record for record in self.records if record.method is method]

    def train_lengths(self) -> List[int]:
        return sorted({record.n_train for record in self.records})
