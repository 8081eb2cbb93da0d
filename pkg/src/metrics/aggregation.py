import logging
from collections.abc import Sequence

import numpy as np

from src.exceptions import InsufficientDataError
from src.metrics.efficiency import lambda_stats
from src.models.results import EfficiencyMeasure, RunStatistics, SolverResult

logger = logging.getLogger(__name__)


def run_levels(result: SolverResult) -> tuple[float, float, float]:
    """Run-level (best, average, worst): the run's best cost and the final iteration's mean and worst."""
    final = result.trace[-1]
    return float(result.best_cost), final.mean, final.worst


def _run_efficiency(result: SolverResult, measure: EfficiencyMeasure) -> float:
    summary = lambda_stats(result.trace)
    return {
        EfficiencyMeasure.MIN: summary.lambda_min,
        EfficiencyMeasure.MEAN: summary.lambda_mean,
        EfficiencyMeasure.MAX: summary.lambda_max,
    }[measure]


def aggregate_replications(
    results: Sequence[SolverResult],
    efficiency_measure: EfficiencyMeasure = EfficiencyMeasure.MEAN,
) -> RunStatistics:
    """Means (M.B, M.A, M.W) and population variances (V.B, V.A, V.W) across replications."""
    if not results:
        raise InsufficientDataError("aggregation needs at least one replication")

    levels = np.array([run_levels(r) for r in results], dtype=np.float64)
    means = levels.mean(axis=0)
    variances = levels.var(axis=0)

    timed = [r for r in results if len(r.trace) >= 2]
    if len(timed) < len(results):
        logger.warning(f"{len(results) - len(timed)} replications have fewer than 2 iterations; no efficiency")
    efficiency = float(np.mean([_run_efficiency(r, efficiency_measure) for r in timed])) if timed else None

    return RunStatistics(
        best_objective=min(r.best_cost for r in results),
        mean_best=float(means[0]),
        mean_avg=float(means[1]),
        mean_worst=float(means[2]),
        var_best=float(variances[0]),
        var_avg=float(variances[1]),
        var_worst=float(variances[2]),
        efficiency=efficiency,
        total_time=float(np.mean([r.wall_time for r in results])),
        replications=len(results),
    )
