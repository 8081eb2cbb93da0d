"""Run contract shared by all solvers.

A solver evaluates candidates in ``initialize`` and then once per ``step``.
The base class times each step with a monotonic clock, turns the step's
candidate costs into an ``IterationTrace`` record, keeps the best assignment,
feeds the strong-convergence detector and calls the observer outside the
timed region.
"""

import logging
import time
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from typing import Optional

import numpy as np

from src.metrics.convergence import StrongConvergenceDetector
from src.models.instance import Assignment, Cost, QapInstance
from src.models.results import IterationTrace, SolverResult
from src.models.solver_config import SolverConfig
from src.qap.objective import objective

logger = logging.getLogger(__name__)

Observer = Callable[[IterationTrace], None]


def linear_schedule(start: float, end: float, iteration: int, total: int) -> float:
    """Value at ``iteration`` (1-based) of a straight line from ``start`` to ``end`` over ``total`` iterations."""
    if total <= 1:
        return start
    return start + (end - start) * (iteration - 1) / (total - 1)


class Solver(ABC):
    def __init__(self, inst: QapInstance, cfg: SolverConfig, rng: np.random.Generator) -> None:
        self.inst = inst
        self.cfg = cfg
        self.rng = rng
        self.n = inst.n
        self.best_perm: np.ndarray = np.arange(self.n)
        self.best_cost: Cost = float("inf")

    def evaluate(self, perm: np.ndarray) -> Cost:
        value = objective(self.inst, perm)
        if value < self.best_cost:
            self.best_cost = value
            self.best_perm = perm.copy()
        return value

    def offer(self, perm: np.ndarray, value: Cost) -> None:
        """Record an already evaluated candidate as best if it improves."""
        if value < self.best_cost:
            self.best_cost = value
            self.best_perm = perm.copy()

    @abstractmethod
    def initialize(self) -> list[Cost]:
        """Set up the initial state; returns the costs evaluated while doing so."""

    @abstractmethod
    def step(self, iteration: int) -> list[Cost]:
        """Run one iteration; returns the costs of the candidates evaluated in it."""

    def run(self, observer: Optional[Observer] = None) -> SolverResult:
        detector = StrongConvergenceDetector.from_settings(self.cfg.detector)
        trace: list[IterationTrace] = []
        elapsed = 0.0
        running_best = float("inf")
        trigger_time: Optional[float] = None
        started = time.perf_counter()

        tick = time.perf_counter()
        pending = self.initialize()
        setup_time = time.perf_counter() - tick

        for iteration in range(1, self.cfg.max_iterations + 1):
            tick = time.perf_counter()
            costs = self.step(iteration)
            lam = time.perf_counter() - tick
            if iteration == 1:
                costs = pending + costs
                lam += setup_time

            record = _record(iteration, costs, lam)
            trace.append(record)
            elapsed += lam
            running_best = min(running_best, record.best)

            state = detector.update(running_best)
            if state.trigger_iteration == iteration:
                trigger_time = elapsed
                logger.debug(f"{self.cfg.algorithm} reached strong convergence at iteration {iteration}")

            if observer is not None:
                observer(record)
            if self.cfg.stop_on_convergence and state.converged:
                break

        wall_time = time.perf_counter() - started
        logger.debug(f"{self.cfg.algorithm} finished {len(trace)} iterations, best {self.best_cost}")
        return SolverResult(
            best_assignment=Assignment.of(self.best_perm),
            best_cost=self.best_cost,
            trace=trace,
            iterations_run=len(trace),
            wall_time=wall_time,
            converged=detector.state.converged,
            trigger_iteration=detector.state.trigger_iteration,
            trigger_time=trigger_time,
        )


def _record(iteration: int, costs: Sequence[Cost], lam: float) -> IterationTrace:
    values = np.asarray(costs, dtype=np.float64)
    return IterationTrace(
        iteration=iteration,
        best=float(values.min()),
        mean=float(values.mean()),
        worst=float(values.max()),
        lam=lam,
    )
