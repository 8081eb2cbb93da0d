"""Strong-convergence detection on the best-cost series.

At iteration i > n the detector computes the coefficient of variation of the
best-so-far costs over every full length-n window ending at t, for
t in (i - n, i]. When the gap between the largest and smallest of those
coefficients is below the threshold, the counter k grows by one; the run has
converged once k reaches the target K. k is never reset.
"""

import logging
from collections.abc import Sequence
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.exceptions import (
    ConfigurationError,
    ContractViolationError,
    InsufficientDataError,
    UndefinedCoefficientOfVariationError,
)
from src.models.results import ConvergenceReport, ConvergenceState, Extrema, IterationTrace
from src.models.solver_config import DetectorSettings

logger = logging.getLogger(__name__)


def window_coefficients(values: np.ndarray) -> np.ndarray:
    """Coefficient of variation of each row; a zero-mean row is 0 only when it has no spread."""
    std = values.std(axis=1)
    mean = values.mean(axis=1)
    zero_mean = mean == 0
    if np.any(zero_mean & (std != 0)):
        raise UndefinedCoefficientOfVariationError("window with zero mean and non-zero spread")
    return np.divide(std, mean, out=np.zeros_like(std), where=~zero_mean)


def strong_convergence_step(
    state: ConvergenceState,
    settings: DetectorSettings,
    i: int,
    best_costs: Sequence[float],
) -> ConvergenceState:
    """Advance the detector to iteration i given the best-cost series up to (at least) i."""
    n = settings.window
    if i <= n:
        return state

    if len(best_costs) < i:
        raise ContractViolationError(f"need {i} best costs, got {len(best_costs)}")
    # full windows ending at t = max(n, i - n + 1) .. i
    series = np.asarray(best_costs[max(0, i - 2 * n + 1) : i], dtype=np.float64)
    if np.any(series < 0):
        raise ContractViolationError("best costs must be non-negative")

    cv = window_coefficients(sliding_window_view(series, n))
    gap = float(cv.max() - cv.min())
    if gap >= settings.threshold:
        return state

    k = state.k + 1
    converged = k >= settings.target
    trigger = state.trigger_iteration
    if converged and trigger is None:
        trigger = i
    return ConvergenceState(k=k, converged=converged, trigger_iteration=trigger)


class StrongConvergenceDetector:
    """Incremental detector fed one best-so-far value per iteration."""

    def __init__(self, window: int = 50, threshold: float = 1e-3, target: int = 10) -> None:
        if window <= 0 or threshold <= 0 or target <= 0:
            raise ConfigurationError(
                f"detector tunables must be positive, got n={window}, delta={threshold}, K={target}"
            )
        self.settings = DetectorSettings(window=window, threshold=threshold, target=target)
        self.state = ConvergenceState()
        self._series: list[float] = []

    @classmethod
    def from_settings(cls, settings: DetectorSettings) -> "StrongConvergenceDetector":
        return cls(settings.window, settings.threshold, settings.target)

    def update(self, best: float) -> ConvergenceState:
        self._series.append(best)
        self.state = strong_convergence_step(self.state, self.settings, len(self._series), self._series)
        return self.state


def _degenerate(value: float) -> Extrema:
    return Extrema(max=value, mean=value, min=value)


def evaluate_convergence(trace: Sequence[IterationTrace], settings: DetectorSettings) -> ConvergenceReport:
    """Replay the detector over a stored trace and report its outcome for this single run."""
    if not trace:
        raise InsufficientDataError("cannot evaluate convergence of an empty trace")

    detector = StrongConvergenceDetector.from_settings(settings)
    best_so_far = float("inf")
    elapsed = 0.0
    objective_at_trigger: Optional[float] = None
    time_at_trigger: Optional[float] = None
    for record in trace:
        best_so_far = min(best_so_far, record.best)
        elapsed += record.lam
        state = detector.update(best_so_far)
        if state.trigger_iteration == record.iteration:
            objective_at_trigger = best_so_far
            time_at_trigger = elapsed

    state = detector.state
    objective = objective_at_trigger if objective_at_trigger is not None else best_so_far
    return ConvergenceReport(
        converged=state.converged,
        trigger_iteration=state.trigger_iteration,
        k_final=state.k,
        window=settings.window,
        threshold=settings.threshold,
        target_k=settings.target,
        objective=_degenerate(objective),
        iterations=_degenerate(state.trigger_iteration) if state.trigger_iteration is not None else None,
        runtime=_degenerate(time_at_trigger) if time_at_trigger is not None else None,
        replications=1,
        converged_runs=int(state.converged),
    )


def _extrema(values: Sequence[float]) -> Optional[Extrema]:
    if not values:
        return None
    return Extrema(max=max(values), mean=float(np.mean(values)), min=min(values))


def table2_summary(reports: Sequence[ConvergenceReport]) -> ConvergenceReport:
    """Max/mean/min of objective, trigger iteration and runtime across replications.

    Non-converged replications count toward the objective columns (at budget)
    but not toward the iteration and runtime columns.
    """
    if not reports:
        raise InsufficientDataError("table-2 summary needs at least one replication")

    first = reports[0]
    converged = [r for r in reports if r.converged]
    not_converged = len(reports) - len(converged)
    if not_converged:
        logger.info(f"{not_converged} of {len(reports)} replications did not reach strong convergence")

    iterations = [r.iterations.mean for r in converged if r.iterations is not None]
    runtimes = [r.runtime.mean for r in converged if r.runtime is not None]
    return ConvergenceReport(
        converged=len(converged) == len(reports),
        trigger_iteration=None,
        k_final=min(r.k_final for r in reports),
        window=first.window,
        threshold=first.threshold,
        target_k=first.target_k,
        objective=_extrema([r.objective.mean for r in reports]),  # type: ignore[arg-type]
        iterations=_extrema(iterations),
        runtime=_extrema(runtimes),
        replications=sum(r.replications for r in reports),
        converged_runs=sum(r.converged_runs for r in reports),
    )
