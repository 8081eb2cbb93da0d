from enum import StrEnum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.instance import Assignment, Cost


class IterationTrace(BaseModel):
    """Candidate statistics and wall time of one solver iteration (numbered from 1)."""

    model_config = ConfigDict(frozen=True)

    iteration: int = Field(..., ge=1)
    best: float
    mean: float
    worst: float
    lam: float = Field(..., ge=0, description="Wall time of this iteration in seconds")

    @model_validator(mode="after")
    def _check_order(self) -> "IterationTrace":
        # mean of floats may land a rounding step outside [best, worst]
        tolerance = 1e-9 * max(1.0, abs(self.worst))
        if not (self.best <= self.mean + tolerance and self.mean <= self.worst + tolerance):
            raise ValueError(f"expected best <= mean <= worst, got {self.best}, {self.mean}, {self.worst}")
        return self


class ConvergenceState(BaseModel):
    """Strong-convergence detector state after a given iteration."""

    model_config = ConfigDict(frozen=True)

    k: int = 0
    converged: bool = False
    trigger_iteration: Optional[int] = None


class SolverResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    best_assignment: Assignment
    best_cost: Cost
    trace: list[IterationTrace]
    iterations_run: int
    wall_time: float
    converged: bool = False
    trigger_iteration: Optional[int] = None
    trigger_time: Optional[float] = None

    def best_so_far(self) -> list[float]:
        running: list[float] = []
        for record in self.trace:
            running.append(min(record.best, running[-1]) if running else record.best)
        return running


class EfficiencyMeasure(StrEnum):
    """Which per-run iteration-time statistic feeds the Efficiency column."""

    MIN = "min"
    MEAN = "mean"
    MAX = "max"


class LambdaStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    lambda_min: float
    lambda_mean: float
    lambda_max: float
    lambda_mean_literal: float = Field(..., description="Sum of deltas divided by the number of recorded iterations S")


class GoodnessOfFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    statistic: float
    p_value: float
    bins: int
    degenerate: bool = False


class RunStatistics(BaseModel):
    """The Table-1 quality measurements for one (instance, algorithm) group."""

    model_config = ConfigDict(frozen=True)

    best_objective: Cost
    mean_best: float
    mean_avg: float
    mean_worst: float
    var_best: float
    var_avg: float
    var_worst: float
    efficiency: Optional[float]
    total_time: float
    replications: int = Field(..., ge=1)


class Extrema(BaseModel):
    model_config = ConfigDict(frozen=True)

    max: float
    mean: float
    min: float


class ConvergenceReport(BaseModel):
    """Detector outcome for one run, or the Table-2 summary across replications."""

    model_config = ConfigDict(frozen=True)

    converged: bool
    trigger_iteration: Optional[int] = None
    k_final: int
    window: int
    threshold: float
    target_k: int
    objective: Extrema
    iterations: Optional[Extrema] = None
    runtime: Optional[Extrema] = None
    replications: int = 1
    converged_runs: int = 0
