"""Business logic layer."""

from src.services.experiment_service import ExperimentService, replication_seed, run_cell, splitmix64
from src.services.report_service import ReportService
from src.services.series_service import emit_series, rolling_variance

__all__ = [
    "ExperimentService",
    "ReportService",
    "emit_series",
    "replication_seed",
    "rolling_variance",
    "run_cell",
    "splitmix64",
]
