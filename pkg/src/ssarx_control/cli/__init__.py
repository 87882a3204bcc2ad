"""CLI exports for the SSARX predictive control tooling."""

from .app import (
    build_parser,
    configure_logging,
    create_service,
    main,
    render_noise_grid,
    render_summary,
    run,
)

__all__ = [
    "build_parser",
    "configure_logging",
    "create_service",
    "main",
    "render_noise_grid",
    "render_summary",
    "run",
]
