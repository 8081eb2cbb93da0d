"""Experiment documents, stored runs and report rows."""

import json
from collections.abc import Mapping
from enum import StrEnum
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.exceptions import ConfigurationError
from src.models.instance import Cost
from src.models.results import ConvergenceReport, EfficiencyMeasure, RunStatistics, SolverResult
from src.models.solver_config import Algorithm, DetectorSettings


MANIFEST_NAME = "run_manifest.json"


class ReportFormat(StrEnum):
    CSV = "csv"
    JSON = "json"


class AlgorithmSpec(BaseModel):
    """One algorithm of an experiment with explicit parameter overrides on top of the tuned defaults."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    algorithm: Algorithm
    overrides: dict[str, Any] = Field(default_factory=dict)

    @field_validator("overrides")
    @classmethod
    def _check_overrides(cls, overrides: dict[str, Any]) -> dict[str, Any]:
        managed = {"algorithm", "seed", "detector", "stop_on_convergence"} & overrides.keys()
        if managed:
            raise ValueError(f"{sorted(managed)} are set by the experiment, not per algorithm")
        return overrides


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    instances: list[Path] = Field(..., min_length=1)
    algorithms: list[AlgorithmSpec] = Field(..., min_length=1)
    replications: int = Field(default=10, ge=1)
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    detector: DetectorSettings = Field(default_factory=DetectorSettings)
    stop_on_convergence: bool = False
    output_dir: Path = Path("results")
    formats: list[ReportFormat] = Field(default_factory=lambda: [ReportFormat.CSV, ReportFormat.JSON], min_length=1)
    half_count: bool = Field(default=False, description="Also emit best objective / 2 (one count per facility pair)")
    swap_matrices: bool = Field(default=False, description="Read the first QAPLIB matrix as distance, second as flow")
    workers: int = Field(default=1, ge=1)
    efficiency_measure: EfficiencyMeasure = EfficiencyMeasure.MEAN

    @model_validator(mode="after")
    def _check_unique(self) -> "ExperimentConfig":
        tags = [spec.algorithm for spec in self.algorithms]
        if len(set(tags)) != len(tags):
            raise ValueError("each algorithm may appear only once")
        stems = [path.stem.lower() for path in self.instances]
        if len(set(stems)) != len(stems):
            raise ValueError("instance file names must be unique")
        return self

    @model_validator(mode="after")
    def _check_overrides(self) -> "ExperimentConfig":
        from src.solvers.defaults import override_errors

        errors = [error for spec in self.algorithms for error in override_errors(spec.algorithm, spec.overrides)]
        if errors:
            raise ValueError("invalid algorithm overrides: " + "; ".join(errors))
        return self

    @classmethod
    def from_file(
        cls,
        path: Path,
        defaults: Optional[Mapping[str, Any]] = None,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> "ExperimentConfig":
        """Load a JSON experiment document; relative paths resolve against its directory.

        ``defaults`` fill keys the document leaves out and ``overrides`` replace
        keys it sets.
        """
        document = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(document, dict):
            raise ConfigurationError(f"{path}: experiment document must be a JSON object")
        experiment = cls.model_validate({**(defaults or {}), **document, **(overrides or {})})
        base = path.parent
        return experiment.model_copy(
            update={
                "instances": [(base / p).resolve() for p in experiment.instances],
                "output_dir": (base / experiment.output_dir).resolve(),
            }
        )

    def save_manifest(self) -> Path:
        """Record the experiment as run next to its outputs, so reports can be rebuilt with the same settings."""
        self.output_dir.mkdir(parents=True, exist_ok=True)
        path = self.output_dir / MANIFEST_NAME
        path.write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path

    @classmethod
    def from_manifest(cls, directory: Path) -> Optional["ExperimentConfig"]:
        path = directory / MANIFEST_NAME
        if not path.is_file():
            return None
        return cls.model_validate_json(path.read_text(encoding="utf-8"))


class RunRecord(BaseModel):
    """One replication of one algorithm on one instance, as stored in a trace file."""

    model_config = ConfigDict(frozen=True)

    instance: str
    instance_path: Optional[Path] = None
    swap_matrices: bool = False
    algorithm: Algorithm
    replication: int = Field(..., ge=1)
    seed: int
    result: SolverResult

    @property
    def group(self) -> tuple[str, Algorithm]:
        return self.instance, self.algorithm


class ReportRow(BaseModel):
    """Table-1 row: instance, algorithm, then Best Obj., M.B, M.A, M.W, V.B, V.A, V.W, Efficiency, Time.

    The table1 files carry every column up to V.W; Efficiency and Time are clock measurements and are
    written to the timing sidecar instead.
    """

    model_config = ConfigDict(frozen=True)

    instance: str
    algorithm: Algorithm
    best_objective: Cost
    mean_best: float
    mean_avg: float
    mean_worst: float
    var_best: float
    var_avg: float
    var_worst: float
    efficiency: Optional[float]
    time: float
    replications: int
    best_objective_half: Optional[float] = None

    @classmethod
    def from_statistics(
        cls, instance: str, algorithm: Algorithm, stats: RunStatistics, half_count: bool = False
    ) -> "ReportRow":
        return cls(
            instance=instance,
            algorithm=algorithm,
            best_objective=stats.best_objective,
            mean_best=stats.mean_best,
            mean_avg=stats.mean_avg,
            mean_worst=stats.mean_worst,
            var_best=stats.var_best,
            var_avg=stats.var_avg,
            var_worst=stats.var_worst,
            efficiency=stats.efficiency,
            time=stats.total_time,
            replications=stats.replications,
            best_objective_half=stats.best_objective / 2 if half_count else None,
        )


class CellFailure(BaseModel):
    model_config = ConfigDict(frozen=True)

    instance: str
    algorithm: Optional[Algorithm] = None
    replication: Optional[int] = None
    source: Optional[Path] = None
    error: str


class GroupReport(BaseModel):
    """Everything reported for one (instance, algorithm) pair."""

    model_config = ConfigDict(frozen=True)

    row: ReportRow
    convergence: ConvergenceReport
    records: list[RunRecord]
