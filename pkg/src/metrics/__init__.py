"""Evaluation framework: quality measurements, efficiency, robustness and strong convergence."""

from src.metrics.aggregation import EfficiencyMeasure, aggregate_replications, run_levels
from src.metrics.convergence import (
    StrongConvergenceDetector,
    evaluate_convergence,
    strong_convergence_step,
    table2_summary,
)
from src.metrics.efficiency import lambda_stats, meeting_iteration, rank_by_robustness, robustness_gof

__all__ = [
    "EfficiencyMeasure",
    "StrongConvergenceDetector",
    "aggregate_replications",
    "evaluate_convergence",
    "lambda_stats",
    "meeting_iteration",
    "rank_by_robustness",
    "robustness_gof",
    "run_levels",
    "strong_convergence_step",
    "table2_summary",
]
