"""
Command-line interface for dataset generation, training, evaluation and sweeps.

Every subcommand except ``inspect`` writes its config, seeds, results and a
JSON run log into the ``--out`` directory.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from app.adapters.filesystem.results_csv import format_sweep_csv
from app.composition import build_filesystem_services, build_inspector
from app.core.config import load_experiment_config, settings
from app.core.exceptions import EXIT_OK, EXIT_USAGE, handle_cli_error
from app.core.logging import attach_run_log, setup_logging
from app.core.metrics import RunMetrics
from app.domain.entities import ModelKind
from app.schemas.experiment import ExperimentConfig, SweepAxis

logger = logging.getLogger(__name__)

DEFAULT_OUT = "runs"


def _parse_assignment(text: str) -> tuple:
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key.strip(), value.strip()


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value experiment config file")
    parser.add_argument("--seed", type=int, help="master seed (u64)")
    parser.add_argument("--out", help="output directory for this run")
    parser.add_argument(
        "--full-scale",
        dest="full_scale",
        action="store_true",
        help="start from the full-scale parameter set",
    )
    parser.add_argument(
        "--set",
        dest="assignments",
        action="append",
        type=_parse_assignment,
        default=[],
        metavar="KEY=VALUE",
        help="override one config field (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prnet", description="Radiation-mode channel extrapolation experiments"
    )
    parser.add_argument("--version", action="version", version=settings.APP_VERSION)
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="build and store a training dataset")
    _add_common(generate)

    train = commands.add_parser("train", help="train a model on a dataset")
    _add_common(train)
    train.add_argument("--model", choices=["prnet", "dnn"], default="prnet")
    train.add_argument("--dataset", help="stored dataset (built from the config when omitted)")

    evaluate = commands.add_parser("evaluate", help="NMSE of a stored model on a test split")
    _add_common(evaluate)
    evaluate.add_argument("--checkpoint", required=True, help="stored model")
    evaluate.add_argument("--dataset", help="stored dataset (built from the config when omitted)")
    evaluate.add_argument("--snr", type=float, help="evaluation SNR in dB")

    sweep = commands.add_parser("sweep", help="NMSE over SNR, antenna count or mode count")
    sweep.add_argument("axis", choices=[axis.value for axis in SweepAxis])
    _add_common(sweep)
    sweep.add_argument(
        "--model",
        dest="models",
        action="append",
        choices=[kind.value for kind in ModelKind],
        help="model family to compare (repeatable)",
    )
    sweep.add_argument("--snr", help="comma-separated SNR values in dB")
    sweep.add_argument("--antennas", help="comma-separated antenna counts")
    sweep.add_argument("--modes", help="comma-separated mode counts")
    sweep.add_argument("--checkpoint", help="evaluate a stored model instead of training")

    inspect = commands.add_parser("inspect", help="print the header of a dataset or checkpoint")
    inspect.add_argument("path")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    overrides: Dict[str, object] = dict(args.assignments)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.command == "sweep":
        if args.models:
            overrides["models"] = args.models
        if args.snr is not None:
            overrides["snr_values"] = args.snr
        if args.antennas is not None:
            overrides["antenna_values"] = args.antennas
        if args.modes is not None:
            overrides["mode_values"] = args.modes
        if args.checkpoint is not None:
            overrides["model_path"] = args.checkpoint
            overrides["train"] = False
    return overrides


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True, default=str))


def _run(args: argparse.Namespace, config: ExperimentConfig, services: dict) -> None:
    if args.command == "generate":
        dataset, location = services["generate_dataset_use_case"].execute(config)
        print(f"dataset: {location} ({dataset.sample_count} samples)")
    elif args.command == "train":
        outcome = services["train_model_use_case"].execute(config, args.model, args.dataset)
        loss = outcome.report.train_loss[-1] if outcome.report.train_loss else float("nan")
        print(f"checkpoint: {outcome.checkpoint_location} (final loss {loss:.6g})")
    elif args.command == "evaluate":
        result = services["evaluate_model_use_case"].execute(
            config, args.checkpoint, args.dataset, args.snr
        )
        print(f"NMSE: {result.nmse_db:.4f} dB ({result.nmse_linear:.6g} linear)")
    elif args.command == "sweep":
        result = services["run_sweep_use_case"].execute(config, SweepAxis(args.axis))
        sys.stdout.write(format_sweep_csv(result))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if not exc.code else EXIT_USAGE

    setup_logging()
    try:
        if args.command == "inspect":
            _print_json(build_inspector().execute(args.path))
            return EXIT_OK

        config = load_experiment_config(args.config, _overrides(args), args.full_scale)
        out = Path(args.out or Path(DEFAULT_OUT) / args.command)
        attach_run_log(out)
        metrics = RunMetrics() if settings.METRICS_ENABLED else None
        services = build_filesystem_services(out, metrics=metrics)
        logger.info(
            "Run started",
            extra={"command": args.command, "out": str(out), "checksum": config.checksum()},
        )
        try:
            _run(args, config, services)
        finally:
            if metrics is not None:
                metrics.write(out / "metrics.prom")
        logger.info("Run finished", extra={"command": args.command, "out": str(out)})
        return EXIT_OK
    except Exception as exc:
        return handle_cli_error(exc)


def run(argv: Optional[List[str]] = None) -> None:
    """Console-script entry point."""
    sys.exit(main(argv))


if __name__ == "__main__":
    run()
