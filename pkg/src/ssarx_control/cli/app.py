"""Command-line interface for data collection, identification, control and experiments."""

from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Sequence

import numpy as np
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ..adapters import ModelStoreError, TrajectoryFormatError
from ..config import ConfigError
from ..harness import DOMAIN_ERRORS, ExperimentError, noise_grid, summarize
from ..models import ClosedLoopResult, McResult, Method
from ..service import ExperimentService, IdentificationResult, PredictionResult

CLI_ERRORS = (ConfigError, ExperimentError, ModelStoreError, TrajectoryFormatError, *DOMAIN_ERRORS)

console = Console()


def configure_logging(verbosity: int) -> None:
    """Install a single rich handler on the root logger."""

    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG

    root = logging.getLogger()
    root.setLevel(level)
    if not any(isinstance(handler, RichHandler) for handler in root.handlers):
        root.addHandler(RichHandler(console=Console(stderr=True), show_path=False))


def _add_config_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        dest="config_files",
        action="append",
        type=Path,
        default=None,
        help="YAML file merged over the packaged benchmark configuration (repeatable).",
    )


def build_parser() -> argparse.ArgumentParser:
    """Construct the CLI argument parser."""

    parser = argparse.ArgumentParser(
        prog="ssarx-dpc", description="SSARX data-driven predictive control"
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Increase log verbosity (-v info, -vv debug).",
    )
    subparsers = parser.add_subparsers(dest="command")

    collect_parser = subparsers.add_parser(
        "collect", help="Simulate closed-loop training data and write it as CSV."
    )
    _add_config_argument(collect_parser)
    collect_parser.add_argument("output", type=Path, help="Destination trajectory CSV.")
    collect_parser.add_argument("--noise", default="20dB-group3", help="Noise grid label.")
    collect_parser.add_argument("--n-train", type=int, default=None, help="Training length.")
    collect_parser.add_argument("--run-index", type=int, default=0, help="Random stream index.")

    identify_parser = subparsers.add_parser(
        "identify", help="Identify an SSARX predictor from a trajectory CSV."
    )
    _add_config_argument(identify_parser)
    identify_parser.add_argument("data", type=Path, help="Trajectory CSV (t, u_*, y_*).")
    identify_parser.add_argument(
        "--output", type=Path, default=None, help="Write the predictor to this model file."
    )
    identify_parser.add_argument(
        "--low-rank", action="store_true", help="Use the reduced-rank Stage-2 regression."
    )
    identify_parser.add_argument(
        "--show-singular-values",
        action="store_true",
        help="Print the whitened cross-covariance singular values used to choose the rank.",
    )

    predict_parser = subparsers.add_parser(
        "predict", help="Predict the future outputs of one window with a stored model."
    )
    predict_parser.add_argument("model", type=Path, help="Predictor model file.")
    predict_parser.add_argument("data", type=Path, help="Trajectory CSV providing the window.")
    predict_parser.add_argument(
        "--anchor", type=int, required=True, help="Index of the first future sample."
    )

    control_parser = subparsers.add_parser(
        "control", help="Run one closed-loop test and write t, r, u, y, y0, qp_status."
    )
    _add_config_argument(control_parser)
    control_parser.add_argument(
        "--method",
        choices=[method.value for method in Method],
        default=Method.SSARX.value,
        help="Controller to run.",
    )
    control_parser.add_argument("--noise", default="20dB-group3", help="Noise grid label.")
    control_parser.add_argument("--run-index", type=int, default=0, help="Random stream index.")
    control_parser.add_argument(
        "--output", type=Path, default=None, help="Closed-loop CSV destination."
    )

    mc_parser = subparsers.add_parser(
        "montecarlo", help="Run a Monte Carlo experiment and write result CSVs."
    )
    _add_config_argument(mc_parser)
    mc_parser.add_argument("output_dir", type=Path, help="Directory for runs/summary CSVs.")
    mc_parser.add_argument(
        "--experiment",
        choices=["cost", "bias"],
        default="cost",
        help="Sinusoid control-cost comparison or constant-reference bias sweep.",
    )
    mc_parser.add_argument(
        "--full", action="store_true", help="Use the full Monte Carlo count (full_n_mc)."
    )
    mc_parser.add_argument("--workers", type=int, default=None, help="Worker processes.")

    subparsers.add_parser("noisegrid", help="Print the measurement/process noise grid.")

    return parser


def create_service() -> ExperimentService:
    """Create the service with the packaged configuration defaults."""

    return ExperimentService()


def render_noise_grid() -> Table:
    table = Table(title="Noise grid (x1e-2)")
    for column in ("Label", "SNR (dB)", "Group", "sigma_v", "sigma_w"):
        table.add_column(column)
    for entry in noise_grid():
        table.add_row(
            entry.label,
            str(entry.snr_db),
            str(entry.group),
            f"{entry.sigma_v * 100:g}",
            f"{entry.sigma_w * 100:g}",
        )
    return table


def render_summary(result: McResult) -> Table:
    table = Table(title=f"{result.metadata.get('experiment', 'experiment')} summary")
    for column in ("Method", "Noise", "N_train", "Runs", "mean J", "median J", "Bias", "Var"):
        table.add_column(column)
    for summary in summarize(result.records):
        table.add_row(
            summary.method.value,
            summary.noise_label,
            str(summary.n_train),
            str(summary.runs),
            f"{summary.mean_cost:.4g}",
            f"{summary.median_cost:.4g}",
            f"{summary.bias:.3e}",
            f"{summary.variance:.3e}",
        )
    return table


def _render_identification(result: IdentificationResult) -> None:
    model = result.model
    console.print(
        f"Identified {model.variant_tag} predictor: L_p={model.l_p}, L_f={model.l_f}, "
        f"samples={result.metadata.get('samples')}"
    )
    if result.singular_values is not None:
        values = np.array2string(result.singular_values, precision=4, separator=", ")
        console.print(f"Whitened singular values: {values}", markup=False)


def _render_prediction(result: PredictionResult) -> None:
    table = Table(title=f"Prediction at anchor {result.anchor}")
    table.add_column("Step")
    table.add_column("y_hat")
    table.add_column("y")
    for step, predicted in enumerate(result.y_hat):
        measured = "-" if result.y_measured is None else f"{result.y_measured[step, 0]:.6g}"
        table.add_row(str(step), f"{predicted[0]:.6g}", measured)
    console.print(table)


def _render_closed_loop(result: ClosedLoopResult) -> None:
    console.print(
        f"{result.metadata.get('method')}: J={result.cost:.6g}, "
        f"J_clean={result.clean_cost:.6g}, softened={result.softened_steps}, "
        f"failed={result.failed_steps}"
    )


def _handle_collect(args: argparse.Namespace) -> int:
    service = create_service()
    try:
        traj = service.collect(
            args.output,
            config_files=args.config_files,
            noise_label=args.noise,
            n_train=args.n_train,
            run_index=args.run_index,
        )
    except CLI_ERRORS as exc:
        print(f"Error: {exc}")
        return 2

    console.print(f"Wrote {traj.length} samples to {args.output}")
    return 0


def _handle_identify(args: argparse.Namespace) -> int:
    service = create_service()
    try:
        result = service.identify(
            args.data,
            args.output,
            config_files=args.config_files,
            low_rank=args.low_rank,
            show_singular_values=args.show_singular_values,
        )
    except CLI_ERRORS as exc:
        print(f"Error: {exc}")
        return 2

    _render_identification(result)
    return 0


def _handle_predict(args: argparse.Namespace) -> int:
    service = create_service()
    try:
        result = service.predict(args.model, args.data, args.anchor)
    except CLI_ERRORS as exc:
        print(f"Error: {exc}")
        return 2

    _render_prediction(result)
    return 0


def _handle_control(args: argparse.Namespace) -> int:
    service = create_service()
    try:
        result = service.control(
            args.output,
            config_files=args.config_files,
            method=Method(args.method),
            noise_label=args.noise,
            run_index=args.run_index,
        )
    except CLI_ERRORS as exc:
        print(f"Error: {exc}")
        return 2

    _render_closed_loop(result)
    return 0


def _handle_montecarlo(args: argparse.Namespace) -> int:
    service = create_service()
    try:
        result = service.montecarlo(
            args.output_dir,
            config_files=args.config_files,
            experiment=args.experiment,
            full=args.full,
            workers=args.workers,
        )
    except CLI_ERRORS as exc:
        print(f"Error: {exc}")
        return 2

    console.print(render_summary(result))
    return 0


HANDLERS = {
    "collect": _handle_collect,
    "identify": _handle_identify,
    "predict": _handle_predict,
    "control": _handle_control,
    "montecarlo": _handle_montecarlo,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point used by tests and the console script."""

    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    if args.command == "noisegrid":
        console.print(render_noise_grid())
        return 0

    handler = HANDLERS.get(args.command)
    if handler is not None:
        return handler(args)

    parser.print_help()
    return 0


def run() -> None:  # pragma: no cover - thin wrapper for module execution
    """Execute the CLI and exit with the produced status code."""

    raise SystemExit(main())


if __name__ == "__main__":  # pragma: no cover - module execution guard
    run()
