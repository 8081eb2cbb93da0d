from pathlib import Path

import hypothesis
import numpy as np
import pytest

from src.models.instance import Assignment, QapInstance
from src.models.results import IterationTrace, SolverResult
from src.models.solver_config import Algorithm, DetectorSettings
from src.qap.qaplib import serialize_qaplib
from src.solvers.base import Solver

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=5)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False)

TINY_QAPLIB = "2\n0 1\n1 0\n0 3\n3 0\n"


def random_instance(n: int, seed: int, high: int = 10, symmetric: bool = False, linear: bool = False) -> QapInstance:
    """Integer instance with zero diagonals."""
    rng = np.random.default_rng(seed)
    flow = rng.integers(0, high, size=(n, n))
    distance = rng.integers(1, high, size=(n, n))
    if symmetric:
        flow, distance = np.triu(flow, 1), np.triu(distance, 1)
        flow, distance = flow + flow.T, distance + distance.T
    np.fill_diagonal(flow, 0)
    np.fill_diagonal(distance, 0)
    linear_cost = rng.integers(0, high, size=(n, n)) if linear else None
    return QapInstance(flow=flow, distance=distance, linear_cost=linear_cost, name=f"rand{n}s{seed}")


def write_qaplib(path: Path, inst: QapInstance) -> Path:
    path.write_text(serialize_qaplib(inst), encoding="utf-8")
    return path


@pytest.fixture
def tiny() -> QapInstance:
    return QapInstance(flow=[[0, 1], [1, 0]], distance=[[0, 3], [3, 0]], name="tiny")


@pytest.fixture
def quiet_detector() -> DetectorSettings:
    """Detector that cannot fire within short test budgets."""
    return DetectorSettings(window=50, threshold=1e-3, target=10)


def make_trace(bests, lams=None, spread: float = 0.0) -> list[IterationTrace]:
    """Trace with given iteration bests; mean and worst sit `spread` and `2 * spread` above."""
    lams = [0.01] * len(bests) if lams is None else lams
    return [
        IterationTrace(iteration=i, best=b, mean=b + spread, worst=b + 2 * spread, lam=lam)
        for i, (b, lam) in enumerate(zip(bests, lams), start=1)
    ]


def make_result(bests, lams=None, spread: float = 0.0, converged: bool = False) -> SolverResult:
    trace = make_trace(bests, lams, spread)
    return SolverResult(
        best_assignment=Assignment.identity(2),
        best_cost=min(bests),
        trace=trace,
        iterations_run=len(trace),
        wall_time=sum(record.lam for record in trace),
        converged=converged,
    )


# per algorithm, the quantity one step may improve but never worsen
GUARANTEED = {
    Algorithm.LSH: lambda s: s.incumbent_cost,
    Algorithm.GA: lambda s: min(s.costs),
    Algorithm.PSO: lambda s: s.gbest_cost,
    Algorithm.GA_PSO: lambda s: s.gbest_cost,
    Algorithm.GWO: lambda s: s.state.alpha.cost,
    Algorithm.HS: lambda s: max(s.costs),
    Algorithm.SA: lambda s: s.best_cost,
}


def guaranteed_series(solver: Solver) -> list[float]:
    """Step a fresh solver through its whole budget, reading its guaranteed quantity after each step."""
    solver.initialize()
    read = GUARANTEED[solver.cfg.algorithm]
    series = []
    for iteration in range(1, solver.cfg.max_iterations + 1):
        solver.step(iteration)
        series.append(float(read(solver)))
    return series
