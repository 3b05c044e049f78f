"""Command-line entry point.

Commands:
    dist MANIFEST               pairwise divergence matrix of a dataset
    classify TRAIN TEST         train on one manifest, report accuracy on another
    verify                      seeded identity suite
    bench                       runtime-scaling benchmark
    synth DIRECTORY             seeded synthetic train/test datasets

Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure,
5 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from loguru import logger

from pycovd.bench import write_bench_csv
from pycovd.const import (
    EXIT_CONFIG_ERROR,
    EXIT_DATA_ERROR,
    EXIT_NUMERIC_ERROR,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
)
from pycovd.exceptions import (
    ConfigError,
    CovdError,
    DataError,
    NumericError,
    VerificationError,
)
from pycovd.features import SyntheticMode
from pycovd.models.config import RunConfig, load_config
from pycovd.serialization import (
    write_matrix_csv,
    write_predictions_csv,
    write_report_json,
    write_sidecar,
    write_svm_model,
)
from pycovd.workflow import CovdWorkflow

EXIT_CODES: tuple[tuple[type[CovdError], int], ...] = (
    (ConfigError, EXIT_CONFIG_ERROR),
    (DataError, EXIT_DATA_ERROR),
    (NumericError, EXIT_NUMERIC_ERROR),
    (VerificationError, EXIT_VERIFICATION_FAILED),
)


def _parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--seed", type=int, help="override config seed")
    common.add_argument("--rho", type=float, help="override config rho")
    common.add_argument("--r", type=int, help="override config rank cap")
    common.add_argument("--output-dir", type=Path, help="override io.output_dir")
    common.add_argument("--verbose", action="store_true", help="log at DEBUG level")

    parser = argparse.ArgumentParser(
        prog="pycovd",
        description="Covariance descriptors and Bregman divergences in RKHS.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    dist = commands.add_parser("dist", parents=[common], help="divergence matrix")
    dist.add_argument("manifest", type=Path)
    classify = commands.add_parser("classify", parents=[common], help="NN / SVM")
    classify.add_argument("train", type=Path)
    classify.add_argument("test", type=Path)
    verify = commands.add_parser("verify", parents=[common], help="identity suite")
    verify.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    commands.add_parser("bench", parents=[common], help="scaling benchmark")
    synth = commands.add_parser("synth", parents=[common], help="synthetic datasets")
    synth.add_argument("directory", type=Path)
    synth.add_argument(
        "--mode",
        choices=[mode.value for mode in SyntheticMode],
        default=SyntheticMode.HIGHER_ORDER.value,
    )
    synth.add_argument("--train-per-class", type=int, default=30)
    synth.add_argument("--test-per-class", type=int, default=30)
    synth.add_argument("--n", type=int, default=3)
    synth.add_argument("--m", type=int, default=200)
    synth.add_argument("--separation", type=float, default=4.0)
    return parser.parse_args(argv)


def _configure_logging(*, verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "INFO")


def _effective_config(args: argparse.Namespace) -> RunConfig:
    return load_config(args.config).with_overrides(
        seed=args.seed,
        rho=args.rho,
        r=args.r,
        output_dir=str(args.output_dir) if args.output_dir is not None else None,
    )


def _output_dir(config: RunConfig) -> Path:
    out = Path(config.io.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(text: str) -> None:
    sys.stdout.write(text + "\n")


def cmd_dist(workflow: CovdWorkflow, manifest: Path) -> int:
    """Write the divergence matrix CSV and its sidecar."""
    outcome = workflow.distance_matrix(manifest)
    target = _output_dir(workflow.config) / "distances.csv"
    write_matrix_csv(target, outcome.matrix)
    write_sidecar(
        target,
        workflow.config,
        {
            "manifest": str(manifest),
            "samples": outcome.paths,
            "labels": outcome.labels,
            "kernel": str(outcome.kernel) if outcome.kernel else None,
            "rho": outcome.rho,
        },
    )
    logger.info("Wrote {}", target)
    return EXIT_OK


def cmd_classify(workflow: CovdWorkflow, train: Path, test: Path) -> int:
    """Write predictions and the accuracy report, print the accuracy table."""
    outcome = workflow.classify(train, test)
    out = _output_dir(workflow.config)
    predictions = write_predictions_csv(
        out / "predictions.csv", outcome.paths, outcome.truth, outcome.predicted
    )
    report = write_report_json(out / "accuracy.json", outcome.report)
    facts = {
        "train": str(train),
        "test": str(test),
        "kernel": str(outcome.kernel) if outcome.kernel else None,
        "rho": outcome.rho,
    }
    write_sidecar(predictions, workflow.config, facts)
    write_sidecar(report, workflow.config, facts)
    if outcome.model is not None:
        saved = write_svm_model(out / "svm_model.json", outcome.model)
        write_sidecar(saved, workflow.config, facts)
    _emit(outcome.report.as_table())
    return EXIT_OK


def cmd_verify(workflow: CovdWorkflow, *, corrupt: bool = False) -> int:
    """Run the identity suite; exit 5 if any identity fails."""
    report = workflow.verify(corrupt=corrupt)
    target = write_report_json(
        _output_dir(workflow.config) / "verification.json", report
    )
    write_sidecar(target, workflow.config)
    _emit(report.as_table())
    if not report.passed:
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        msg = f"identities failed: {failed}"
        raise VerificationError(msg)
    return EXIT_OK


def cmd_bench(workflow: CovdWorkflow) -> int:
    """Run the benchmark, write CSV and JSON, print the tables."""
    report = workflow.bench()
    out = _output_dir(workflow.config)
    target = write_bench_csv(out / "bench.csv", report)
    write_report_json(out / "bench.json", report)
    write_sidecar(target, workflow.config)
    _emit(report.as_table())
    return EXIT_OK


def cmd_synth(workflow: CovdWorkflow, args: argparse.Namespace) -> int:
    """Write seeded train and test manifests."""
    train, test = workflow.synth(
        args.directory,
        mode=args.mode,
        train_per_class=args.train_per_class,
        test_per_class=args.test_per_class,
        n=args.n,
        m=args.m,
        separation=args.separation,
    )
    _emit(f"{train}\n{test}")
    return EXIT_OK


def _dispatch(args: argparse.Namespace) -> int:
    workflow = CovdWorkflow(_effective_config(args))
    if args.command == "dist":
        return cmd_dist(workflow, args.manifest)
    if args.command == "classify":
        return cmd_classify(workflow, args.train, args.test)
    if args.command == "verify":
        return cmd_verify(workflow, corrupt=args.corrupt)
    if args.command == "bench":
        return cmd_bench(workflow)
    return cmd_synth(workflow, args)


def main(argv: list[str] | None = None) -> int:
    """Run one command and map failures to exit codes.

    Args:
        argv: Arguments without the program name (None = sys.argv).

    Returns:
        The process exit code.

    """
    args = _parse_args(argv)
    _configure_logging(verbose=args.verbose)
    try:
        return _dispatch(args)
    except CovdError as error:
        logger.error("{}: {}", type(error).__name__, error)
        for kind, code in EXIT_CODES:
            if isinstance(error, kind):
                return code
        return EXIT_NUMERIC_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
