"""Random-key particle swarm optimization and the hybrid GA-PSO.

Particles move in key space and are evaluated through ``decode_keys``. The
cognitive and social coefficients decrease linearly from their start to their
end values over the iteration budget. The hybrid additionally mutates each
personal best and the global best with a GA mutation, keeping a mutant only
when it is cheaper; the mutant is written back by re-encoding the stored key
vector. Mutations draw from their own random stream, so with no accepted
mutant the hybrid follows exactly the same trajectory as plain PSO.
"""

import numpy as np

from src.models.instance import Cost
from src.operators.permutation import Mutation, decode_keys_array, draw_rearrangement, reencode_keys
from src.solvers.base import Solver, linear_schedule

MUTATIONS = (Mutation.INSERTION, Mutation.INVERSION, Mutation.EXCHANGE)


class ParticleSwarmSolver(Solver):
    hybrid = False

    def initialize(self) -> list[Cost]:
        size = self.cfg.population_size
        self.x = self.rng.random((size, self.n))
        self.v = np.zeros_like(self.x)
        self.pbest_x = self.x.copy()
        self.pbest_perm = [np.arange(self.n) for _ in range(size)]
        self.pbest_cost: list[Cost] = [float("inf")] * size
        self.gbest_x = self.x[0].copy()
        self.gbest_perm = np.arange(self.n)
        self.gbest_cost: Cost = float("inf")
        if self.hybrid:
            self.mutation_rng = self.rng.spawn(1)[0]
        # positions are evaluated at the start of each iteration
        return []

    def coefficients(self, iteration: int) -> tuple[float, float]:
        total = self.cfg.max_iterations
        return (
            linear_schedule(self.cfg.c1_start, self.cfg.c1_end, iteration, total),
            linear_schedule(self.cfg.c2_start, self.cfg.c2_end, iteration, total),
        )

    def _mutant(self, keys: np.ndarray, perm: np.ndarray, cost: Cost) -> tuple[np.ndarray, np.ndarray, Cost, Cost]:
        """Mutate a stored best; returns (keys, perm, cost) to keep plus the mutant's cost."""
        kind = MUTATIONS[int(self.mutation_rng.integers(len(MUTATIONS)))]
        candidate = perm[draw_rearrangement(kind, self.n, self.mutation_rng)]
        candidate_cost = self.evaluate(candidate)
        if candidate_cost < cost:
            return reencode_keys(keys, candidate), candidate, candidate_cost, candidate_cost
        return keys, perm, cost, candidate_cost

    def step(self, iteration: int) -> list[Cost]:
        costs: list[Cost] = []
        c1, c2 = self.coefficients(iteration)

        for i in range(self.cfg.population_size):
            perm = decode_keys_array(self.x[i])
            value = self.evaluate(perm)
            costs.append(value)

            if value < self.pbest_cost[i]:
                self.pbest_x[i], self.pbest_perm[i], self.pbest_cost[i] = self.x[i].copy(), perm, value
            if self.hybrid:
                keys, best_perm, best_cost, tried = self._mutant(
                    self.pbest_x[i], self.pbest_perm[i], self.pbest_cost[i]
                )
                self.pbest_x[i], self.pbest_perm[i], self.pbest_cost[i] = keys, best_perm, best_cost
                costs.append(tried)

            if self.pbest_cost[i] < self.gbest_cost:
                self.gbest_x, self.gbest_perm, self.gbest_cost = (
                    self.pbest_x[i].copy(),
                    self.pbest_perm[i],
                    self.pbest_cost[i],
                )
            if self.hybrid:
                self.gbest_x, self.gbest_perm, self.gbest_cost, tried = self._mutant(
                    self.gbest_x, self.gbest_perm, self.gbest_cost
                )
                costs.append(tried)

            r1 = self.rng.random(self.n)
            r2 = self.rng.random(self.n)
            self.v[i] = (
                self.cfg.inertia * self.v[i]
                + c1 * r1 * (self.pbest_x[i] - self.x[i])
                + c2 * r2 * (self.gbest_x - self.x[i])
            )
            self.x[i] = self.x[i] + self.v[i]
        return costs


class HybridSwarmSolver(ParticleSwarmSolver):
    hybrid = True
