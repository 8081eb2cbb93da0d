"""Simulated annealing on the pairwise-exchange neighborhood.

One iteration is one temperature plateau of ``moves_per_temperature`` random
exchanges evaluated with ``swap_delta``; the temperature then drops
geometrically. The starting temperature is calibrated so that roughly
``t0_acceptance_ratio`` of uphill moves from the initial assignment would be
accepted.
"""

import logging
import math

import numpy as np

from src.models.instance import Cost
from src.qap.objective import swap_delta_array
from src.solvers.base import Solver

logger = logging.getLogger(__name__)

CALIBRATION_SAMPLES = 100


def acceptance_probability(delta: float, temperature: float) -> float:
    """Metropolis rule."""
    if delta <= 0:
        return 1.0
    return math.exp(-delta / temperature)


class SimulatedAnnealingSolver(Solver):
    def _draw_pairs(self, count: int) -> tuple[np.ndarray, np.ndarray]:
        first = self.rng.integers(self.n, size=count)
        second = self.rng.integers(self.n - 1, size=count)
        second += second >= first
        return first, second

    def calibrate(self) -> float:
        first, second = self._draw_pairs(CALIBRATION_SAMPLES)
        deltas = np.array(
            [swap_delta_array(self.inst, self.current, int(i), int(j)) for i, j in zip(first, second)],
            dtype=np.float64,
        )
        uphill = deltas[deltas > 0]
        if uphill.size == 0:
            logger.debug("No uphill move sampled during calibration; starting at T=1")
            return 1.0
        return float(-uphill.mean() / math.log(self.cfg.t0_acceptance_ratio))

    def initialize(self) -> list[Cost]:
        self.current = self.rng.permutation(self.n)
        self.current_cost = self.evaluate(self.current)
        self.temperature = self.cfg.initial_temperature or self.calibrate()
        logger.debug(f"Simulated annealing starts at T={self.temperature:.6g}")
        return [self.current_cost]

    def step(self, iteration: int) -> list[Cost]:
        moves = self.cfg.moves_per_temperature
        first, second = self._draw_pairs(moves)
        thresholds = self.rng.random(moves)
        costs: list[Cost] = []

        for i, j, u in zip(first.tolist(), second.tolist(), thresholds.tolist()):
            delta = swap_delta_array(self.inst, self.current, i, j)
            candidate = self.current_cost + delta
            costs.append(candidate)
            if delta <= 0 or u < acceptance_probability(delta, self.temperature):
                self.current[i], self.current[j] = self.current[j], self.current[i]
                self.current_cost = candidate
                self.offer(self.current, candidate)

        self.temperature *= self.cfg.cooling_alpha
        return costs
