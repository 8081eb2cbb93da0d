"""Objective evaluation for the Koopmans-Beckmann QAP.

The objective is the full ordered-pair double sum

    z(p) = sum_i sum_j f_ij * d_{p[i], p[j]}

including the i = j terms, optionally plus the linear allocation term
sum_i b_{p[i], i}. QAPLIB publishes values in this counting; halving gives the
unordered-pair convention used by some reports.
"""

import itertools
import logging
from typing import Union

import numpy as np

from src.exceptions import ContractViolationError, InstanceTooLargeError, MissingMatrixError
from src.models.instance import Assignment, Cost, QapInstance

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_N = 10
_BRUTE_FORCE_CHUNK = 40_320


def _check_dimension(inst: QapInstance, a: Assignment) -> None:
    if a.n != inst.n:
        raise ContractViolationError(f"assignment has {a.n} facilities, instance has {inst.n}")


def _scalar(value: Union[np.integer, np.floating]) -> Cost:
    return value.item()  # type: ignore[no-any-return]


def quadratic_cost(flow: np.ndarray, distance: np.ndarray, perm: np.ndarray) -> Cost:
    """Double sum for a raw permutation array (no validation)."""
    return _scalar(np.sum(flow * distance[np.ix_(perm, perm)]))


def linear_cost_term(linear_cost: np.ndarray, perm: np.ndarray) -> Cost:
    return _scalar(np.sum(linear_cost[perm, np.arange(perm.size)]))


def cost(inst: QapInstance, a: Assignment) -> Cost:
    _check_dimension(inst, a)
    return quadratic_cost(inst.flow, inst.distance, a.as_array())


def cost_linear(inst: QapInstance, a: Assignment) -> Cost:
    """Quadratic objective plus sum_i b[perm[i], i] (b indexed [location, facility])."""
    if inst.linear_cost is None:
        raise MissingMatrixError(f"instance {inst.name or '<unnamed>'} has no linear cost matrix")
    _check_dimension(inst, a)
    perm = a.as_array()
    return quadratic_cost(inst.flow, inst.distance, perm) + linear_cost_term(inst.linear_cost, perm)


def objective(inst: QapInstance, perm: np.ndarray) -> Cost:
    """Objective used by the solvers: includes the linear term when the instance carries one."""
    value = quadratic_cost(inst.flow, inst.distance, perm)
    if inst.linear_cost is not None:
        value += linear_cost_term(inst.linear_cost, perm)
    return value


def swap_delta_array(inst: QapInstance, perm: np.ndarray, r: int, s: int) -> Cost:
    """O(n) change of `objective` when facilities r and s exchange locations."""
    if r == s:
        return 0
    flow, distance = inst.flow, inst.distance
    pr, ps = perm[r], perm[s]

    # Rows and columns r, s of the double sum; entries k = r, s are corrected below.
    row = (flow[r] - flow[s]) * (distance[ps, perm] - distance[pr, perm])
    col = (flow[:, r] - flow[:, s]) * (distance[perm, ps] - distance[perm, pr])
    term = row + col
    delta = term.sum() - term[r] - term[s]

    delta += flow[r, r] * (distance[ps, ps] - distance[pr, pr])
    delta += flow[s, s] * (distance[pr, pr] - distance[ps, ps])
    delta += flow[r, s] * (distance[ps, pr] - distance[pr, ps])
    delta += flow[s, r] * (distance[pr, ps] - distance[ps, pr])

    if inst.linear_cost is not None:
        b = inst.linear_cost
        delta += b[ps, r] + b[pr, s] - b[pr, r] - b[ps, s]
    return _scalar(delta)


def swap_delta(inst: QapInstance, a: Assignment, i: int, j: int) -> Cost:
    """Signed objective change when facilities i and j exchange locations, without building the swap."""
    _check_dimension(inst, a)
    if not (0 <= i < inst.n and 0 <= j < inst.n):
        raise IndexError(f"facility indices ({i}, {j}) out of range for n={inst.n}")
    return swap_delta_array(inst, a.as_array(), i, j)


def brute_force(inst: QapInstance) -> tuple[Assignment, Cost]:
    """Exhaustive minimizer; ties go to the lexicographically smallest permutation."""
    n = inst.n
    if n > BRUTE_FORCE_MAX_N:
        raise InstanceTooLargeError(f"brute force refused for n={n} (limit {BRUTE_FORCE_MAX_N})")

    flow, distance = inst.flow, inst.distance
    best_perm: np.ndarray = np.arange(n)
    best_cost: Cost = objective(inst, best_perm)

    # itertools.permutations yields lexicographic order; argmin keeps the first minimum.
    for chunk in itertools.batched(itertools.permutations(range(n)), _BRUTE_FORCE_CHUNK):
        perms = np.array(chunk, dtype=np.intp)
        costs = np.einsum("ij,kij->k", flow, distance[perms[:, :, None], perms[:, None, :]])
        if inst.linear_cost is not None:
            costs = costs + inst.linear_cost[perms, np.arange(n)].sum(axis=1)
        k = int(np.argmin(costs))
        if costs[k] < best_cost:
            best_cost = _scalar(costs[k])
            best_perm = perms[k]

    logger.debug(f"Brute force on {inst.name or '<unnamed>'}: optimum {best_cost}")
    return Assignment.of(best_perm), best_cost
