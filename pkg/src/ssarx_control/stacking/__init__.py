"""Past/future stacking and block-Hankel construction."""

from .hankel import (
    HankelSet,
    StackedWindow,
    StackingError,
    build_hankels,
    dump_hankels,
    stack_window,
)

__all__ = [
    "HankelSet",
    "StackedWindow",
    "StackingError",
    "build_hankels",
    "dump_hankels",
    "stack_window",
]
