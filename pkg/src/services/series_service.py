"""Plot-ready series from a run trace."""

import csv
import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.exceptions import InsufficientDataError
from src.models.results import IterationTrace

logger = logging.getLogger(__name__)

ROLLING_WINDOW = 50


def rolling_variance(values: Sequence[float], window: int = ROLLING_WINDOW) -> np.ndarray:
    """Population variance of each full window; entry j covers values[j : j + window]."""
    series = np.asarray(values, dtype=np.float64)
    if series.size < window:
        return np.empty(0)
    return sliding_window_view(series, window).var(axis=1)


def _write_rows(path: Path, header: Sequence[str], rows: list[list[object]]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def emit_series(
    trace: Sequence[IterationTrace], directory: Path, stem: str, window: int = ROLLING_WINDOW
) -> list[Path]:
    """Write the convergence, per-iteration time and rolling variance-of-best series for one run.

    The rolling variance starts at the first iteration with a full window
    behind it, so a 100-iteration trace gives rows for iterations 50 to 100.
    """
    if not trace:
        raise InsufficientDataError("cannot emit series for an empty trace")
    directory.mkdir(parents=True, exist_ok=True)

    convergence = [[r.iteration, r.best, r.mean, r.worst] for r in trace]
    efficiency = [[r.iteration, r.lam] for r in trace]
    variances = rolling_variance([r.best for r in trace], window)
    variance_rows = [[trace[j + window - 1].iteration, float(v)] for j, v in enumerate(variances)]

    paths = [
        _write_rows(directory / f"{stem}_convergence.csv", ("iteration", "best", "mean", "worst"), convergence),
        _write_rows(directory / f"{stem}_efficiency.csv", ("iteration", "lambda"), efficiency),
        _write_rows(directory / f"{stem}_variance.csv", ("iteration", "variance"), variance_rows),
    ]
    logger.debug(f"Wrote {len(paths)} series for {stem} to {directory}")
    return paths
