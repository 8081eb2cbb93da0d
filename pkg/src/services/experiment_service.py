"""Service layer for running replicated experiments."""

import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict

from src.models.experiment import AlgorithmSpec, CellFailure, ExperimentConfig, RunRecord
from src.models.instance import QapInstance
from src.models.solver_config import DetectorSettings
from src.repositories.instance_repository import InstanceRepository
from src.repositories.trace_repository import TraceRepository
from src.solvers import run
from src.solvers.defaults import resolve_solver_config

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARTIAL = 2


def splitmix64(value: int) -> int:
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def replication_seed(master_seed: int, replication: int) -> int:
    """Seed of replication r; independent of how many replications an experiment has."""
    return (master_seed ^ splitmix64(replication)) & MASK64


class CellTask(BaseModel):
    """One (instance, algorithm, replication) run."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    instance: QapInstance
    instance_path: Path
    swap_matrices: bool = False
    spec: AlgorithmSpec
    replication: int
    seed: int
    detector: DetectorSettings
    stop_on_convergence: bool = False

    @property
    def label(self) -> str:
        return f"{self.instance.name}/{self.spec.algorithm}/r{self.replication}"


class CellOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    record: Optional[RunRecord] = None
    failure: Optional[CellFailure] = None


def run_cell(task: CellTask) -> CellOutcome:
    """Run one cell; failures are returned, not raised, so other cells keep going."""
    try:
        overrides = {
            **task.spec.overrides,
            "seed": task.seed,
            "detector": task.detector,
            "stop_on_convergence": task.stop_on_convergence,
        }
        cfg = resolve_solver_config(task.spec.algorithm, task.instance.n, overrides)
        result = run(task.instance, cfg)
        record = RunRecord(
            instance=task.instance.name,
            instance_path=task.instance_path,
            swap_matrices=task.swap_matrices,
            algorithm=task.spec.algorithm,
            replication=task.replication,
            seed=task.seed,
            result=result,
        )
        return CellOutcome(record=record)
    except Exception as e:
        logger.exception(f"Cell {task.label} failed")
        failure = CellFailure(
            instance=task.instance.name,
            algorithm=task.spec.algorithm,
            replication=task.replication,
            source=task.instance_path,
            error=f"{type(e).__name__}: {e}",
        )
        return CellOutcome(failure=failure)


class ExperimentOutcome(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    instances: dict[str, QapInstance]
    records: list[RunRecord]
    failures: list[CellFailure]

    @property
    def exit_status(self) -> int:
        return EXIT_PARTIAL if self.failures else EXIT_OK


class ExperimentService:
    """Runs every (instance x algorithm x replication) cell of an experiment and stores the traces."""

    def __init__(self, experiment: ExperimentConfig) -> None:
        self.experiment = experiment
        self.instances = InstanceRepository(swap_matrices=experiment.swap_matrices)
        self.traces = TraceRepository(experiment.output_dir)

    def load_instances(self) -> dict[Path, QapInstance]:
        """Read every instance up front; an unreadable or malformed file aborts the experiment."""
        return {path: self.instances.load(path) for path in self.experiment.instances}

    def cells(self, instances: dict[Path, QapInstance]) -> list[CellTask]:
        exp = self.experiment
        return [
            CellTask(
                instance=inst,
                instance_path=path,
                swap_matrices=exp.swap_matrices,
                spec=spec,
                replication=replication,
                seed=replication_seed(exp.master_seed, replication),
                detector=exp.detector,
                stop_on_convergence=exp.stop_on_convergence,
            )
            for path, inst in instances.items()
            for spec in exp.algorithms
            for replication in range(1, exp.replications + 1)
        ]

    def execute(self, tasks: list[CellTask]) -> list[CellOutcome]:
        workers = min(self.experiment.workers, len(tasks))
        if workers <= 1:
            return [run_cell(task) for task in tasks]

        logger.info(f"Running {len(tasks)} cells on {workers} worker processes")
        with ProcessPoolExecutor(max_workers=workers) as executor:
            # map keeps submission order, so output does not depend on completion order
            return list(executor.map(run_cell, tasks))

    def run(self) -> ExperimentOutcome:
        instances = self.load_instances()
        tasks = self.cells(instances)
        logger.info(
            f"Experiment: {len(instances)} instances x {len(self.experiment.algorithms)} algorithms x "
            f"{self.experiment.replications} replications = {len(tasks)} cells"
        )

        records: list[RunRecord] = []
        failures: list[CellFailure] = []
        for task, outcome in zip(tasks, self.execute(tasks), strict=True):
            if outcome.record is not None:
                path = self.traces.save(outcome.record)
                logger.info(f"{task.label}: best {outcome.record.result.best_cost} -> {path.name}")
                records.append(outcome.record)
            elif outcome.failure is not None:
                failures.append(outcome.failure)

        if failures:
            logger.warning(f"{len(failures)} of {len(tasks)} cells failed")
        return ExperimentOutcome(
            instances={inst.name: inst for inst in instances.values()},
            records=records,
            failures=failures,
        )
