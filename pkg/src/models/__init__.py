from src.models.experiment import (
    AlgorithmSpec,
    CellFailure,
    ExperimentConfig,
    GroupReport,
    ReportFormat,
    ReportRow,
    RunRecord,
)
from src.models.instance import Assignment, Cost, QapInstance
from src.models.results import (
    ConvergenceReport,
    ConvergenceState,
    EfficiencyMeasure,
    Extrema,
    GoodnessOfFit,
    IterationTrace,
    LambdaStats,
    RunStatistics,
    SolverResult,
)
from src.models.solver_config import Algorithm, DetectorSettings, MutationMix, SolverConfig

__all__ = [
    "Algorithm",
    "AlgorithmSpec",
    "Assignment",
    "CellFailure",
    "ConvergenceReport",
    "ConvergenceState",
    "Cost",
    "DetectorSettings",
    "EfficiencyMeasure",
    "ExperimentConfig",
    "Extrema",
    "GoodnessOfFit",
    "GroupReport",
    "IterationTrace",
    "LambdaStats",
    "MutationMix",
    "QapInstance",
    "ReportFormat",
    "ReportRow",
    "RunRecord",
    "RunStatistics",
    "SolverConfig",
    "SolverResult",
]
