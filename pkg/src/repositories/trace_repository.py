"""Line-oriented run trace files.

A trace file starts with ``# key=value`` header lines describing the run,
followed by a tab-separated column header and one row per iteration::

    # instance=scr15
    # algorithm=sa
    ...
    iteration	best	mean	worst	lambda
    1	60942.0	63710.5	71252.0	0.0031

Floats are written with ``repr`` so that reading a file back reproduces the
run exactly.
"""

import logging
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from src.exceptions import TraceFormatError
from src.models.experiment import CellFailure, RunRecord
from src.models.instance import Assignment, Cost
from src.models.results import IterationTrace, SolverResult
from src.models.solver_config import Algorithm

logger = logging.getLogger(__name__)

TRACE_SUFFIX = ".trace"
COLUMNS = ("iteration", "best", "mean", "worst", "lambda")
REQUIRED_KEYS = (
    "instance",
    "algorithm",
    "replication",
    "seed",
    "best_cost",
    "best_assignment",
    "iterations_run",
    "wall_time",
    "converged",
)


def _optional(value: Optional[object]) -> str:
    return "" if value is None else repr(value)


def _parse_cost(token: str) -> Cost:
    try:
        return int(token)
    except ValueError:
        return float(token)


def dumps(record: RunRecord) -> str:
    result = record.result
    header = {
        "instance": record.instance,
        "instance_path": str(record.instance_path) if record.instance_path else "",
        "swap_matrices": "true" if record.swap_matrices else "false",
        "algorithm": str(record.algorithm),
        "replication": str(record.replication),
        "seed": str(record.seed),
        "best_cost": repr(result.best_cost),
        "best_assignment": " ".join(str(v) for v in result.best_assignment.perm),
        "iterations_run": str(result.iterations_run),
        "wall_time": repr(result.wall_time),
        "converged": "true" if result.converged else "false",
        "trigger_iteration": _optional(result.trigger_iteration),
        "trigger_time": _optional(result.trigger_time),
    }
    lines = [f"# {key}={value}" for key, value in header.items()]
    lines.append("\t".join(COLUMNS))
    lines.extend(f"{r.iteration}\t{r.best!r}\t{r.mean!r}\t{r.worst!r}\t{r.lam!r}" for r in result.trace)
    return "\n".join(lines) + "\n"


def loads(text: str, path: Optional[Path] = None) -> RunRecord:
    header: dict[str, str] = {}
    rows: list[IterationTrace] = []
    seen_columns = False

    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if not sep:
                raise TraceFormatError(path, f"line {number}: header without '='")
            header[key.strip()] = value.strip()
            continue
        if not seen_columns:
            if tuple(line.split()) != COLUMNS:
                raise TraceFormatError(path, f"line {number}: expected columns {' '.join(COLUMNS)}")
            seen_columns = True
            continue

        fields = line.split("\t")
        if len(fields) != len(COLUMNS):
            raise TraceFormatError(path, f"line {number}: expected {len(COLUMNS)} fields, found {len(fields)}")
        try:
            rows.append(
                IterationTrace(
                    iteration=int(fields[0]),
                    best=float(fields[1]),
                    mean=float(fields[2]),
                    worst=float(fields[3]),
                    lam=float(fields[4]),
                )
            )
        except (ValueError, ValidationError) as err:
            raise TraceFormatError(path, f"line {number}: {err}") from err

    missing = [key for key in REQUIRED_KEYS if key not in header]
    if missing:
        raise TraceFormatError(path, f"missing header keys {missing}")
    if not rows:
        raise TraceFormatError(path, "no iteration rows")

    try:
        result = SolverResult(
            best_assignment=Assignment.of([int(v) for v in header["best_assignment"].split()]),
            best_cost=_parse_cost(header["best_cost"]),
            trace=rows,
            iterations_run=int(header["iterations_run"]),
            wall_time=float(header["wall_time"]),
            converged=header["converged"] == "true",
            trigger_iteration=int(header["trigger_iteration"]) if header.get("trigger_iteration") else None,
            trigger_time=float(header["trigger_time"]) if header.get("trigger_time") else None,
        )
        return RunRecord(
            instance=header["instance"],
            instance_path=Path(header["instance_path"]) if header.get("instance_path") else None,
            swap_matrices=header.get("swap_matrices") == "true",
            algorithm=Algorithm(header["algorithm"]),
            replication=int(header["replication"]),
            seed=int(header["seed"]),
            result=result,
        )
    except (ValueError, ValidationError) as err:
        raise TraceFormatError(path, str(err)) from err


class TraceRepository:
    def __init__(self, root: Path) -> None:
        """Trace files live in ``<root>/traces``."""
        self.root = root
        self.directory = root / "traces"

    def path_for(self, record: RunRecord) -> Path:
        return self.directory / f"{record.instance}__{record.algorithm}__r{record.replication:03d}{TRACE_SUFFIX}"

    def save(self, record: RunRecord) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path_for(record)
        path.write_text(dumps(record), encoding="utf-8")
        return path

    def load(self, path: Path) -> RunRecord:
        return loads(path.read_text(encoding="utf-8"), path)

    def trace_files(self) -> list[Path]:
        # accept a bare directory of traces as well as a run output directory
        directory = self.directory if self.directory.is_dir() else self.root
        return sorted(directory.glob(f"*{TRACE_SUFFIX}"))

    def load_all(self) -> tuple[list[RunRecord], list[CellFailure]]:
        """Every readable trace; corrupt files are reported as failures without stopping the rest."""
        records: list[RunRecord] = []
        failures: list[CellFailure] = []
        for path in self.trace_files():
            try:
                records.append(self.load(path))
            except (OSError, TraceFormatError) as err:
                logger.error(f"Skipping trace {path.name}: {err}")
                failures.append(CellFailure(instance=path.stem.split("__")[0], source=path, error=str(err)))
        logger.info(f"Loaded {len(records)} traces from {self.root}")
        return records, failures
