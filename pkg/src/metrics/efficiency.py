"""Per-iteration time statistics and robustness of an algorithm's iteration times."""

import logging
import math
from collections.abc import Mapping, Sequence
from typing import Optional

import numpy as np
from scipy import stats

from src.exceptions import ContractViolationError, InsufficientDataError
from src.models.results import GoodnessOfFit, IterationTrace, LambdaStats

logger = logging.getLogger(__name__)

MIN_EXPECTED_PER_BIN = 5


def iteration_deltas(trace: Sequence[IterationTrace]) -> list[float]:
    """Times between consecutive iterations, i.e. the per-iteration times after the first."""
    return [record.lam for record in trace[1:]]


def lambda_stats(trace: Sequence[IterationTrace]) -> LambdaStats:
    """Minimum, mean and maximum time per iteration.

    The first iteration carries start-up cost and is excluded. ``lambda_mean``
    averages the S - 1 remaining times; ``lambda_mean_literal`` divides their
    sum by S instead.
    """
    if len(trace) < 2:
        raise InsufficientDataError(f"lambda statistics need at least 2 iterations, got {len(trace)}")
    deltas = np.asarray(iteration_deltas(trace), dtype=np.float64)
    return LambdaStats(
        lambda_min=float(deltas.min()),
        lambda_mean=float(deltas.mean()),
        lambda_max=float(deltas.max()),
        lambda_mean_literal=float(deltas.sum() / len(trace)),
    )


def default_bins(samples: int) -> int:
    return max(2, math.isqrt(samples))


def robustness_gof(
    lambdas: Sequence[float],
    bins: Optional[int] = None,
    bounds: Optional[tuple[float, float]] = None,
) -> GoodnessOfFit:
    """Pearson chi-square of iteration times against a uniform distribution.

    Equal-width bins span ``bounds`` (default: the sample minimum and maximum),
    each expecting m / bins samples. A lower statistic means a more robust
    algorithm.
    """
    samples = np.asarray(lambdas, dtype=np.float64)
    bins = default_bins(samples.size) if bins is None else bins
    if bins < 2:
        raise ContractViolationError(f"need at least 2 bins, got {bins}")
    if samples.size < MIN_EXPECTED_PER_BIN * bins:
        raise InsufficientDataError(
            f"goodness of fit over {bins} bins needs {MIN_EXPECTED_PER_BIN * bins} samples, got {samples.size}"
        )

    low, high = bounds if bounds is not None else (float(samples.min()), float(samples.max()))
    if high <= low:
        return GoodnessOfFit(statistic=0.0, p_value=1.0, bins=bins, degenerate=True)

    observed, _ = np.histogram(np.clip(samples, low, high), bins=bins, range=(low, high))
    expected = np.full(bins, samples.size / bins)
    statistic, p_value = stats.chisquare(observed, expected)
    return GoodnessOfFit(statistic=float(statistic), p_value=float(p_value), bins=bins)


def rank_by_robustness(results: Mapping[str, GoodnessOfFit]) -> list[str]:
    """Algorithm names from most to least robust."""
    return sorted(results, key=lambda name: (not results[name].degenerate, results[name].statistic, name))


def meeting_iteration(trace: Sequence[IterationTrace], rel_tol: float = 1e-9) -> Optional[int]:
    """First iteration at which the best, mean and worst series coincide."""
    for record in trace:
        if math.isclose(record.best, record.worst, rel_tol=rel_tol, abs_tol=rel_tol):
            return record.iteration
    return None
