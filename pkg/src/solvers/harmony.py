"""Random-key harmony search."""

import numpy as np

from src.models.instance import Cost
from src.operators.permutation import decode_keys_array
from src.solvers.base import Solver


class HarmonySearchSolver(Solver):
    def initialize(self) -> list[Cost]:
        self.memory = self.rng.random((self.cfg.hms, self.n))
        self.costs = [self.evaluate(decode_keys_array(keys)) for keys in self.memory]
        return list(self.costs)

    def improvise(self) -> np.ndarray:
        """Compose one harmony: memory consideration with pitch adjustment, else a fresh random key."""
        dims = np.arange(self.n)
        from_memory = self.rng.random(self.n) < self.cfg.hmcr
        members = self.rng.integers(self.cfg.hms, size=self.n)
        fresh = self.rng.random(self.n)
        harmony = np.where(from_memory, self.memory[members, dims], fresh)

        adjust = from_memory & (self.rng.random(self.n) < self.cfg.par)
        shift = self.rng.uniform(-self.cfg.bandwidth, self.cfg.bandwidth, self.n)
        return np.where(adjust, harmony + shift, harmony)

    def step(self, iteration: int) -> list[Cost]:
        harmony = self.improvise()
        value = self.evaluate(decode_keys_array(harmony))
        worst = int(np.argmax(self.costs))
        if value < self.costs[worst]:
            self.memory[worst] = harmony
            self.costs[worst] = value
        return list(self.costs)
