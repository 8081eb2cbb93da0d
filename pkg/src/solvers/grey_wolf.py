"""Random-key grey wolf optimizer.

The three best positions found so far lead the pack (alpha, beta, delta).
Each wolf moves to the mean of its three encircling targets; the random
vectors r1 and r2 are drawn afresh for every leader. The parameter ``a``
decreases linearly from ``a_start`` to ``a_end`` over the budget.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.models.instance import Cost
from src.operators.permutation import decode_keys_array
from src.solvers.base import Solver, linear_schedule


class Wolf(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    keys: np.ndarray
    cost: Cost


class GwoState(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: Wolf
    beta: Wolf
    delta: Wolf
    pack: list[Wolf]
    a: float

    @property
    def leaders(self) -> tuple[Wolf, Wolf, Wolf]:
        return self.alpha, self.beta, self.delta


def encircle(leader: np.ndarray, wolf: np.ndarray, a: float, r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """Position suggested by one leader: X_L - A * |C * X_L - X| with A = 2a*r1 - a, C = 2*r2."""
    big_a = 2 * a * r1 - a
    big_c = 2 * r2
    return leader - big_a * np.abs(big_c * leader - wolf)


class GreyWolfSolver(Solver):
    state: GwoState

    def _rank(self, pool: list[tuple[Wolf, bool]], a: float) -> GwoState:
        """Order (wolf, is_leader) entries by cost; the first three lead, remaining wolves form the pack."""
        ordered = sorted(pool, key=lambda entry: entry[0].cost)
        leaders = [wolf for wolf, _ in ordered[:3]]
        while len(leaders) < 3:
            leaders.append(leaders[-1])
        pack = [wolf for wolf, is_leader in ordered[3:] if not is_leader]
        return GwoState(alpha=leaders[0], beta=leaders[1], delta=leaders[2], pack=pack, a=a)

    def initialize(self) -> list[Cost]:
        self.positions = self.rng.random((self.cfg.population_size, self.n))
        costs = [self.evaluate(decode_keys_array(keys)) for keys in self.positions]
        pool = [(Wolf(keys=keys.copy(), cost=cost), False) for keys, cost in zip(self.positions, costs)]
        self.state = self._rank(pool, self.cfg.a_start)
        return costs

    def step(self, iteration: int) -> list[Cost]:
        a = linear_schedule(self.cfg.a_start, self.cfg.a_end, iteration, self.cfg.max_iterations)
        leaders = self.state.leaders

        for w in range(self.cfg.population_size):
            wolf = self.positions[w]
            moved = np.zeros(self.n)
            for leader in leaders:
                r1 = self.rng.random(self.n)
                r2 = self.rng.random(self.n)
                moved += encircle(leader.keys, wolf, a, r1, r2)
            self.positions[w] = moved / len(leaders)

        costs = [self.evaluate(decode_keys_array(keys)) for keys in self.positions]
        # distinct leaders only, so a duplicated alpha does not crowd out new wolves
        unique_leaders = list({id(leader): leader for leader in leaders}.values())
        pool = [(leader, True) for leader in unique_leaders]
        pool += [(Wolf(keys=keys.copy(), cost=cost), False) for keys, cost in zip(self.positions, costs)]
        self.state = self._rank(pool, a)
        return costs
