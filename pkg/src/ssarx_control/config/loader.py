"""Loading and layering experiment configuration files."""

from __future__ import annotations

import copy
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence

import yaml
from pydantic import ValidationError

from .schema import ExperimentConfig


class ConfigError(RuntimeError):
    """Raised when configuration files cannot be loaded, parsed or validated."""


_DEFAULTS_DIR = Path(__file__).resolve().parent / "defaults"
DEFAULT_CONFIG = _DEFAULTS_DIR / "benchmark.yaml"
BIAS_SWEEP_OVERLAY = _DEFAULTS_DIR / "bias_sweep.yaml"


def deep_merge(base: Mapping[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """Merge ``override`` into a copy of ``base``; nested mappings merge, lists replace."""

    merged: Dict[str, Any] = copy.deepcopy(dict(base))
    for key, value in override.items():
        current = merged.get(key)
        if isinstance(current, Mapping) and isinstance(value, Mapping):
            merged[key] = deep_merge(current, value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class ConfigLoader:
    """Load the packaged default configuration and layer user files over it."""

    def __init__(self, default_files: Sequence[Path | str] | None = None) -> None:
        paths: List[Path]
        if default_files is None:
            paths = [DEFAULT_CONFIG] if DEFAULT_CONFIG.exists() else []
        else:
            paths = [Path(path) for path in default_files]

        self._default_files = paths

    # ------------------------------------------------------------------
    def load(
        self,
        files: Sequence[Path | str] | None = None,
        *,
        overrides: Mapping[str, Any] | None = None,
    ) -> ExperimentConfig:
        """Return the validated configuration after merging every layer in order."""

        paths = list(self._default_files)
        if files:
            paths.extend(Path(path) for path in files)

        data: Dict[str, Any] = {}
        for path in paths:
            data = deep_merge(data, self._load_file(path))
        if overrides:
            data = deep_merge(data, overrides)

        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as exc:
            sources = ", ".join(str(path) for path in paths) or "<no files>"
            raise ConfigError(f"Invalid experiment configuration ({sources}):\n{exc}") from exc

    # ------------------------------------------------------------------
    def _load_file(self, path: Path) -> Dict[str, Any]:
        if not path.exists():
            raise ConfigError(f"Configuration file not found: {path}")

        try:
            content = path.read_text(encoding="utf-8")
        except OSError as exc:  # pragma: no cover - filesystem errors surfaced to caller
            raise ConfigError(f"Failed to read configuration file {path}") from exc

        try:
            data = yaml.safe_load(content) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"Invalid YAML in configuration file {path}") from exc

        if not isinstance(data, Mapping):
            raise ConfigError(f"Configuration file must be a mapping: {path}")

        return dict(data)


__all__ = ["BIAS_SWEEP_OVERLAY", "DEFAULT_CONFIG", "ConfigError", "ConfigLoader", "deep_merge"]
