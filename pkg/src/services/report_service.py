"""Service layer turning run records into Table-1, Table-2 and timing reports.

``table1`` and ``table2`` hold only values fixed by the seeds, so repeated and
parallel runs of the same experiment write them byte for byte identically.
Everything measured with a clock goes to the ``timing`` sidecar together with
the generation timestamp: the Efficiency and Time columns of Table 1 are in
``table1_timing.csv`` and ``timing.json``, as is the runtime at the
strong-convergence trigger that completes Table 2.
"""

import csv
import json
import logging
import math
from collections import defaultdict
from collections.abc import Callable, Iterable, Mapping, Sequence
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

import numpy as np

from src.exceptions import InsufficientDataError, QapError
from src.metrics import (
    aggregate_replications,
    evaluate_convergence,
    lambda_stats,
    meeting_iteration,
    rank_by_robustness,
    robustness_gof,
    table2_summary,
)
from src.metrics.efficiency import iteration_deltas
from src.models.experiment import CellFailure, GroupReport, ReportFormat, ReportRow, RunRecord
from src.models.instance import Assignment, Cost, QapInstance
from src.models.results import EfficiencyMeasure, GoodnessOfFit, SolverResult
from src.models.solver_config import DetectorSettings
from src.qap.objective import cost, cost_linear

logger = logging.getLogger(__name__)

TABLE1_COLUMNS = (
    "instance",
    "algorithm",
    "best_objective",
    "mean_best",
    "mean_avg",
    "mean_worst",
    "var_best",
    "var_avg",
    "var_worst",
    "replications",
)
HALF_COLUMN = "best_objective_half"
TABLE2_COLUMNS = (
    "instance",
    "algorithm",
    "window",
    "threshold",
    "target_k",
    "replications",
    "converged_runs",
    "k_final",
    "objective_max",
    "objective_mean",
    "objective_min",
    "iterations_max",
    "iterations_mean",
    "iterations_min",
)
TIMING_COLUMNS = (
    "instance",
    "algorithm",
    "efficiency",
    "time",
    "lambda_min",
    "lambda_mean",
    "lambda_max",
    "chi_square",
    "p_value",
    "bins",
    "runtime_max",
    "runtime_mean",
    "runtime_min",
)

InstanceLookup = Callable[[RunRecord], QapInstance]


def confirmed_cost(inst: QapInstance, assignment: Assignment) -> Cost:
    """Objective of a stored assignment, recomputed from the instance data."""
    if inst.linear_cost is not None:
        return cost_linear(inst, assignment)
    return cost(inst, assignment)


def _with_best_cost(record: RunRecord, value: Cost) -> RunRecord:
    result: SolverResult = record.result.model_copy(update={"best_cost": value})
    return record.model_copy(update={"result": result})


def _cell(value: Any) -> Any:
    return "" if value is None else value


def _write_csv(path: Path, columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(column)) for column in columns])
    return path


def _write_json(path: Path, payload: Any) -> Path:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path


class ReportService:
    def __init__(
        self,
        output_dir: Path,
        detector: DetectorSettings,
        formats: Sequence[ReportFormat] = (ReportFormat.CSV, ReportFormat.JSON),
        half_count: bool = False,
        efficiency_measure: EfficiencyMeasure = EfficiencyMeasure.MEAN,
    ) -> None:
        self.output_dir = output_dir
        self.detector = detector
        self.formats = list(formats)
        self.half_count = half_count
        self.efficiency_measure = efficiency_measure

    def verify(
        self, records: Sequence[RunRecord], lookup: InstanceLookup
    ) -> tuple[list[RunRecord], list[CellFailure]]:
        """Re-evaluate every stored best assignment; records whose instance is unavailable are dropped."""
        verified: list[RunRecord] = []
        failures: list[CellFailure] = []
        for record in records:
            try:
                value = confirmed_cost(lookup(record), record.result.best_assignment)
            except (OSError, KeyError, QapError) as e:
                logger.error(f"Cannot confirm best cost of {record.instance}/{record.algorithm}: {e}")
                failures.append(
                    CellFailure(
                        instance=record.instance,
                        algorithm=record.algorithm,
                        replication=record.replication,
                        source=record.instance_path,
                        error=f"{type(e).__name__}: {e}",
                    )
                )
                continue

            stored = record.result.best_cost
            if not math.isclose(value, stored, rel_tol=1e-9, abs_tol=1e-9):
                logger.warning(
                    f"{record.instance}/{record.algorithm} r{record.replication}: stored best {stored} "
                    f"but assignment evaluates to {value}"
                )
            verified.append(_with_best_cost(record, value))
        return verified, failures

    def build(self, records: Sequence[RunRecord]) -> list[GroupReport]:
        """One report per (instance, algorithm) pair, sorted by instance then algorithm."""
        groups: dict[tuple[str, str], list[RunRecord]] = defaultdict(list)
        for record in records:
            groups[(record.instance, str(record.algorithm))].append(record)

        reports: list[GroupReport] = []
        for key in sorted(groups):
            members = sorted(groups[key], key=lambda r: r.replication)
            results = [r.result for r in members]
            stats = aggregate_replications(results, self.efficiency_measure)
            convergence = table2_summary([evaluate_convergence(r.trace, self.detector) for r in results])
            row = ReportRow.from_statistics(members[0].instance, members[0].algorithm, stats, self.half_count)
            reports.append(GroupReport(row=row, convergence=convergence, records=members))
        return reports

    def table1_rows(self, groups: Sequence[GroupReport]) -> list[dict[str, Any]]:
        columns = self.table1_columns
        dumped = [group.row.model_dump(mode="json") for group in groups]
        return [{column: row[column] for column in columns} for row in dumped]

    @property
    def table1_columns(self) -> tuple[str, ...]:
        if not self.half_count:
            return TABLE1_COLUMNS
        return (*TABLE1_COLUMNS[:3], HALF_COLUMN, *TABLE1_COLUMNS[3:])

    def table2_rows(self, groups: Sequence[GroupReport]) -> list[dict[str, Any]]:
        rows = []
        for group in groups:
            report = group.convergence
            row: dict[str, Any] = {
                "instance": group.row.instance,
                "algorithm": str(group.row.algorithm),
                "window": report.window,
                "threshold": report.threshold,
                "target_k": report.target_k,
                "replications": report.replications,
                "converged_runs": report.converged_runs,
                "k_final": report.k_final,
                "objective_max": report.objective.max,
                "objective_mean": report.objective.mean,
                "objective_min": report.objective.min,
            }
            for stat in ("max", "mean", "min"):
                row[f"iterations_{stat}"] = getattr(report.iterations, stat) if report.iterations else None
            rows.append(row)
        return rows

    def timing_entry(self, group: GroupReport) -> dict[str, Any]:
        results = [r.result for r in group.records]
        entry: dict[str, Any] = {
            "instance": group.row.instance,
            "algorithm": str(group.row.algorithm),
            "efficiency": group.row.efficiency,
            "time": group.row.time,
        }

        timed = [lambda_stats(r.trace) for r in results if len(r.trace) >= 2]
        if timed:
            entry["lambda"] = {
                "min": min(s.lambda_min for s in timed),
                "mean": float(np.mean([s.lambda_mean for s in timed])),
                "max": max(s.lambda_max for s in timed),
                "mean_literal": float(np.mean([s.lambda_mean_literal for s in timed])),
            }
        else:
            entry["lambda"] = {"error": "insufficient data: lambda statistics need at least 2 iterations"}

        samples = [lam for r in results for lam in iteration_deltas(r.trace)]
        try:
            entry["robustness"] = robustness_gof(samples).model_dump()
        except InsufficientDataError as e:
            entry["robustness"] = {"error": f"insufficient data: {e}"}

        runtime = group.convergence.runtime
        entry["runtime"] = runtime.model_dump() if runtime else None
        entry["runs"] = [self._run_timing(r) for r in group.records]
        return entry

    @staticmethod
    def _run_timing(record: RunRecord) -> dict[str, Any]:
        trace = record.result.trace
        meeting = meeting_iteration(trace)
        meeting_time = sum(r.lam for r in trace if r.iteration <= meeting) if meeting is not None else None
        return {
            "replication": record.replication,
            "wall_time": record.result.wall_time,
            "trigger_iteration": record.result.trigger_iteration,
            "trigger_time": record.result.trigger_time,
            "meeting_iteration": meeting,
            "meeting_time": meeting_time,
        }

    @staticmethod
    def robustness_ranking(entries: Sequence[Mapping[str, Any]]) -> dict[str, list[str]]:
        """Per instance, algorithms ordered from most to least robust iteration times."""
        by_instance: dict[str, dict[str, GoodnessOfFit]] = defaultdict(dict)
        for entry in entries:
            gof = entry["robustness"]
            if "error" not in gof:
                by_instance[entry["instance"]][entry["algorithm"]] = GoodnessOfFit.model_validate(gof)
        return {instance: rank_by_robustness(results) for instance, results in sorted(by_instance.items())}

    @staticmethod
    def _timing_row(entry: Mapping[str, Any]) -> dict[str, Any]:
        lam, gof, runtime = entry["lambda"], entry["robustness"], entry["runtime"] or {}
        return {
            "instance": entry["instance"],
            "algorithm": entry["algorithm"],
            "efficiency": entry["efficiency"],
            "time": entry["time"],
            "lambda_min": lam.get("min"),
            "lambda_mean": lam.get("mean"),
            "lambda_max": lam.get("max"),
            "chi_square": gof.get("statistic"),
            "p_value": gof.get("p_value"),
            "bins": gof.get("bins"),
            "runtime_max": runtime.get("max"),
            "runtime_mean": runtime.get("mean"),
            "runtime_min": runtime.get("min"),
        }

    def write(self, groups: Sequence[GroupReport], failures: Sequence[CellFailure] = ()) -> list[Path]:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        table1 = self.table1_rows(groups)
        table2 = self.table2_rows(groups)

        if ReportFormat.CSV in self.formats:
            written.append(_write_csv(self.output_dir / "table1.csv", self.table1_columns, table1))
            written.append(_write_csv(self.output_dir / "table2.csv", TABLE2_COLUMNS, table2))
        if ReportFormat.JSON in self.formats:
            table1_doc = {"columns": self.table1_columns, "rows": table1}
            written.append(_write_json(self.output_dir / "table1.json", table1_doc))
            written.append(_write_json(self.output_dir / "table2.json", {"columns": TABLE2_COLUMNS, "rows": table2}))

        entries = [self.timing_entry(group) for group in groups]
        timing = {
            "generated_at": datetime.now(UTC).isoformat(),
            "efficiency_measure": str(self.efficiency_measure),
            "groups": entries,
            "robustness_ranking": self.robustness_ranking(entries),
        }
        written.append(_write_json(self.output_dir / "timing.json", timing))
        if ReportFormat.CSV in self.formats:
            rows = [self._timing_row(entry) for entry in entries]
            written.append(_write_csv(self.output_dir / "table1_timing.csv", TIMING_COLUMNS, rows))

        failures_path = self.output_dir / "failures.json"
        if failures:
            written.append(_write_json(failures_path, [f.model_dump(mode="json") for f in failures]))
        elif failures_path.exists():
            failures_path.unlink()

        logger.info(f"Wrote {len(groups)} report rows to {self.output_dir}")
        return written

    def report(
        self,
        records: Sequence[RunRecord],
        lookup: InstanceLookup,
        failures: Sequence[CellFailure] = (),
    ) -> tuple[list[GroupReport], list[CellFailure]]:
        """Verify, aggregate and write; returns the groups and every failure seen so far."""
        verified, rejected = self.verify(records, lookup)
        all_failures = [*failures, *rejected]
        groups = self.build(verified)
        self.write(groups, all_failures)
        return groups, all_failures


def cached_lookup(load: Callable[[Path, bool], QapInstance]) -> InstanceLookup:
    """Instance lookup by the path and orientation stored in each record, loading each file once."""
    cache: dict[tuple[Path, bool], QapInstance] = {}

    def lookup(record: RunRecord) -> QapInstance:
        if record.instance_path is None:
            raise KeyError(f"trace for {record.instance} does not name its instance file")
        key = (record.instance_path, record.swap_matrices)
        if key not in cache:
            cache[key] = load(*key)
        return cache[key]

    return lookup


def name_lookup(instances: Mapping[str, QapInstance]) -> InstanceLookup:
    def lookup(record: RunRecord) -> QapInstance:
        return instances[record.instance]

    return lookup

