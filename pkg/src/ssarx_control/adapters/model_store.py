"""Plain-text storage of identified SSARX predictors."""

from __future__ import annotations

import io
import json
import os
from pathlib import Path
from typing import Any, Dict

import numpy as np

from ..models import PredictorModel, PredictorVariant

FORMAT_TAG = "ssarx-predictor v1"
_MATRICES = ("gamma_k", "phi_u_big", "phi_y_big")


class ModelStoreError(RuntimeError):
    """Raised when a predictor file cannot be written or parsed."""


def _matrix_block(name: str, matrix: np.ndarray) -> str:
    buffer = io.StringIO()
    np.savetxt(buffer, np.atleast_2d(matrix), fmt="%.17g")
    return f"[{name}] {matrix.shape[0]} {matrix.shape[1]}\n{buffer.getvalue()}"


def save_model(model: PredictorModel, path: str | os.PathLike[str]) -> Path:
    """Write a ``# key: value`` header followed by one section per matrix."""

    target = Path(path)
    header = {
        "variant": model.variant.value,
        "rank": "none" if model.rank is None else str(model.rank),
        "l_p": str(model.l_p),
        "l_f": str(model.l_f),
        "n_u": str(model.n_u),
        "n_y": str(model.n_y),
        "hyperparameters": json.dumps(model.hyperparameters, sort_keys=True, default=str),
    }
    lines = [f"# {FORMAT_TAG}"] + [f"# {key}: {value}" for key, value in header.items()]
    body = "".join(_matrix_block(name, getattr(model, name)) for name in _MATRICES)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text("\n".join(lines) + "\n" + body, encoding="utf-8")
    except OSError as exc:
        raise ModelStoreError(f"Failed to write predictor model {target}: {exc}") from exc
    return target


def _parse_header(lines: list[str], source: Path) -> Dict[str, str]:
    if not lines or lines[0].strip() != f"# {FORMAT_TAG}":
        raise ModelStoreError(f"{source} is not a predictor model file ({FORMAT_TAG})")
    header: Dict[str, str] = {}
    for line in lines[1:]:
        if not line.startswith("#"):
            break
        key, sep, value = line[1:].partition(":")
        if sep:
            header[key.strip()] = value.strip()
    return header


def _parse_matrices(lines: list[str], source: Path) -> Dict[str, np.ndarray]:
    matrices: Dict[str, np.ndarray] = {}
    index = 0
    while index < len(lines):
        line = lines[index].strip()
        index += 1
        if not line.startswith("["):
            continue
        try:
            name, rows, cols = line[1:].replace("]", " ").split()
            shape = (int(rows), int(cols))
            block = lines[index : index + shape[0]]
            values = np.array([[float(x) for x in row.split()] for row in block], dtype=float)
        except ValueError as exc:
            raise ModelStoreError(f"Malformed section {line!r} in {source}") from exc
        if values.size == 0:
            values = values.reshape(shape)
        if values.shape != shape:
            raise ModelStoreError(
                f"Section {name} in {source} has shape {values.shape}, header says {shape}"
            )
        matrices[name] = values
        index += shape[0]
    return matrices


def load_model(path: str | os.PathLike[str]) -> PredictorModel:
    source = Path(path)
    if not source.exists():
        raise ModelStoreError(f"Predictor model file not found: {source}")
    try:
        lines = source.read_text(encoding="utf-8").splitlines()
    except OSError as exc:  # pragma: no cover - filesystem errors surfaced to caller
        raise ModelStoreError(f"Failed to read predictor model {source}") from exc

    header = _parse_header(lines, source)
    matrices = _parse_matrices(lines, source)
    missing = [name for name in _MATRICES if name not in matrices]
    if missing:
        raise ModelStoreError(f"{source} is missing section(s): {', '.join(missing)}")

    try:
        hyperparameters: Dict[str, Any] = json.loads(header.get("hyperparameters", "{}"))
        rank = header.get("rank", "none")
        return PredictorModel(
            gamma_k=matrices["gamma_k"],
            phi_u_big=matrices["phi_u_big"],
            phi_y_big=matrices["phi_y_big"],
            l_p=int(header["l_p"]),
            l_f=int(header["l_f"]),
            n_u=int(header["n_u"]),
            n_y=int(header["n_y"]),
            variant=PredictorVariant(header["variant"]),
            rank=None if rank == "none" else int(rank),
            hyperparameters=hyperparameters,
        )
    except (KeyError, ValueError) as exc:
        raise ModelStoreError(f"Invalid header in {source}: {exc}") from exc


__all__ = ["FORMAT_TAG", "ModelStoreError", "load_model", "save_model"]
