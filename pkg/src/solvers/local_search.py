"""2-Opt local search heuristic with inversion-mutation restarts.

One iteration scans every facility pair (i, j > i) of the incumbent and keeps
each improving exchange. After a completed scan the incumbent is perturbed by
an inversion mutation; the perturbed start replaces the incumbent only if it is
cheaper, otherwise the next scan restarts from the incumbent. The final
iteration skips the perturbation and rescans until no exchange improves, so the
returned assignment is swap-local-optimal.
"""

from src.models.instance import Cost
from src.operators.permutation import Mutation, draw_rearrangement
from src.qap.objective import swap_delta_array
from src.solvers.base import Solver


class LocalSearchSolver(Solver):
    def initialize(self) -> list[Cost]:
        self.incumbent = self.rng.permutation(self.n)
        self.incumbent_cost = self.evaluate(self.incumbent)
        return [self.incumbent_cost]

    def _scan(self, costs: list[Cost]) -> bool:
        perm = self.incumbent.copy()
        value = self.incumbent_cost
        improved = False
        for i in range(self.n - 1):
            for j in range(i + 1, self.n):
                delta = swap_delta_array(self.inst, perm, i, j)
                costs.append(value + delta)
                if delta < 0:
                    perm[i], perm[j] = perm[j], perm[i]
                    value += delta
                    self.offer(perm, value)
                    improved = True
        self.incumbent, self.incumbent_cost = perm, value
        return improved

    def step(self, iteration: int) -> list[Cost]:
        costs: list[Cost] = []
        final = iteration == self.cfg.max_iterations

        if iteration > 1 and not final:
            start = self.incumbent[draw_rearrangement(Mutation.INVERSION, self.n, self.rng)]
            start_cost = self.evaluate(start)
            costs.append(start_cost)
            if start_cost < self.incumbent_cost:
                self.incumbent, self.incumbent_cost = start, start_cost

        improved = self._scan(costs)
        while final and improved:
            improved = self._scan(costs)
        return costs
