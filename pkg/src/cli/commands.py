"""Command-line subcommands: run, report, oracle and series."""

import argparse
import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Optional

from src.config import config
from src.exceptions import QapError
from src.models.experiment import MANIFEST_NAME, ExperimentConfig, ReportFormat
from src.models.instance import QapInstance
from src.models.results import EfficiencyMeasure
from src.qap.objective import brute_force
from src.repositories.instance_repository import InstanceRepository
from src.repositories.trace_repository import TRACE_SUFFIX, TraceRepository
from src.services.experiment_service import EXIT_FAILURE, EXIT_OK, EXIT_PARTIAL, ExperimentService
from src.services.report_service import ReportService, cached_lookup, name_lookup
from src.services.series_service import emit_series

logger = logging.getLogger(__name__)


def _u64(value: str) -> int:
    seed = int(value, 0)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {value}")
    return seed


def _positive(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Experiment keys set explicitly on the command line."""
    overrides: dict[str, Any] = {}
    if args.out is not None:
        overrides["output_dir"] = args.out.resolve()
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.half_count:
        overrides["half_count"] = True
    if args.swap_matrices:
        overrides["swap_matrices"] = True
    return overrides


def _load_instance(path: Path, swap_matrices: bool) -> QapInstance:
    return InstanceRepository(swap_matrices=swap_matrices).load(path)


def load_experiment(path: Path, overrides: dict[str, Any]) -> ExperimentConfig:
    return ExperimentConfig.from_file(path, defaults=config.experiment_defaults(), overrides=overrides)


def cmd_run(args: argparse.Namespace) -> int:
    """Run every cell of an experiment, then write traces and reports."""
    try:
        experiment = load_experiment(args.config, _overrides(args))
        outcome = ExperimentService(experiment).run()
    except (OSError, ValueError) as e:
        logger.error(f"Experiment {args.config} not run: {e}")
        return EXIT_FAILURE

    experiment.save_manifest()
    reports = ReportService(
        output_dir=experiment.output_dir,
        detector=experiment.detector,
        formats=experiment.formats,
        half_count=experiment.half_count,
        efficiency_measure=experiment.efficiency_measure,
    )
    _, failures = reports.report(outcome.records, name_lookup(outcome.instances), outcome.failures)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    """Regenerate reports from stored traces and the settings the run recorded.

    ``--config`` takes precedence over the run manifest; without either, the
    environment's detector settings apply.
    """
    source = args.config if args.config is not None else args.traces / MANIFEST_NAME
    try:
        if args.config is not None:
            experiment: Optional[ExperimentConfig] = load_experiment(args.config, {})
        else:
            experiment = ExperimentConfig.from_manifest(args.traces)
    except (OSError, ValueError) as e:
        logger.error(f"Cannot read experiment {source}: {e}")
        return EXIT_FAILURE

    if experiment is not None:
        detector, formats = experiment.detector, experiment.formats
        half_count, measure = experiment.half_count or args.half_count, experiment.efficiency_measure
    else:
        logger.warning(f"No {MANIFEST_NAME} in {args.traces}; using environment report settings")
        detector, formats = config.detector, list(ReportFormat)
        half_count, measure = args.half_count, EfficiencyMeasure.MEAN

    traces = TraceRepository(args.traces)
    records, failures = traces.load_all()
    if not records and not failures:
        logger.error(f"No trace files found in {args.traces}")
        return EXIT_FAILURE

    reports = ReportService(
        output_dir=args.out if args.out is not None else args.traces,
        detector=detector,
        formats=formats,
        half_count=half_count,
        efficiency_measure=measure,
    )
    _, all_failures = reports.report(records, cached_lookup(_load_instance), failures)
    return EXIT_PARTIAL if all_failures else EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    """Exact optimum of a small instance by enumeration."""
    try:
        inst = InstanceRepository(swap_matrices=args.swap_matrices).load(args.instance)
        assignment, best = brute_force(inst)
    except (OSError, QapError) as e:
        logger.error(f"Oracle failed for {args.instance}: {e}")
        return EXIT_FAILURE

    print(json.dumps({"instance": inst.name, "n": inst.n, "cost": best, "assignment": list(assignment.perm)}))
    return EXIT_OK


def cmd_series(args: argparse.Namespace) -> int:
    """Plot-ready series for one trace file or every trace in a directory."""
    target: Path = args.trace
    repository = TraceRepository(target if target.is_dir() else target.parent)
    paths = repository.trace_files() if target.is_dir() else [target]
    if not paths:
        logger.error(f"No {TRACE_SUFFIX} files found in {target}")
        return EXIT_FAILURE

    out = args.out if args.out is not None else repository.root / "series"
    failed = 0
    for path in paths:
        try:
            record = repository.load(path)
        except (OSError, QapError) as e:
            logger.error(f"Skipping {path}: {e}")
            failed += 1
            continue
        emit_series(record.result.trace, out, path.stem)

    if failed == len(paths):
        return EXIT_FAILURE
    return EXIT_PARTIAL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qap-bench", description="QAP solvers and benchmark harness")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Run an experiment and write traces and reports")
    run.add_argument("--config", type=Path, required=True, help="Experiment JSON document")
    run.add_argument("--out", type=Path, default=None, help="Output directory (overrides the document)")
    run.add_argument("--seed", type=_u64, default=None, help="Master seed (overrides the document)")
    run.add_argument("--workers", type=_positive, default=None, help="Worker processes")
    run.add_argument("--half-count", action="store_true", help="Also report best objective / 2")
    run.add_argument("--swap-matrices", action="store_true", help="Read the first QAPLIB matrix as distance")
    run.set_defaults(handler=cmd_run)

    report = subparsers.add_parser("report", help="Regenerate reports from stored traces")
    report.add_argument("traces", type=Path, help="Run output directory or directory of trace files")
    report.add_argument("--config", type=Path, default=None, help="Experiment document for report settings")
    report.add_argument("--out", type=Path, default=None, help="Report directory (default: the trace directory)")
    report.add_argument("--half-count", action="store_true", help="Also report best objective / 2")
    report.set_defaults(handler=cmd_report)

    oracle = subparsers.add_parser("oracle", help="Exact optimum of an instance with n <= 10")
    oracle.add_argument("instance", type=Path, help="QAPLIB instance file")
    oracle.add_argument("--swap-matrices", action="store_true", help="Read the first QAPLIB matrix as distance")
    oracle.set_defaults(handler=cmd_oracle)

    series = subparsers.add_parser("series", help="Write plot-ready series for stored traces")
    series.add_argument("trace", type=Path, help="Trace file or directory of trace files")
    series.add_argument("--out", type=Path, default=None, help="Series directory (default: <traces>/series)")
    series.set_defaults(handler=cmd_series)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger.debug(f"Running command {args.command}")
    status: int = args.handler(args)
    return status
