"""Generational genetic algorithm: roulette-wheel selection, MOX crossover,
ISM/IVM/EM mutation and elitism of one."""

import numpy as np

from src.models.instance import Assignment, Cost
from src.operators.permutation import Mutation, mox_crossover, mutate, roulette_select
from src.solvers.base import Solver

MUTATIONS = (Mutation.INSERTION, Mutation.INVERSION, Mutation.EXCHANGE)


class GeneticSolver(Solver):
    def initialize(self) -> list[Cost]:
        mix = self.cfg.mutation_mix
        weights = np.array([mix.ism, mix.ivm, mix.em], dtype=np.float64)
        self.mutation_weights = weights / weights.sum()

        self.population = [self.rng.permutation(self.n) for _ in range(self.cfg.population_size)]
        self.costs = [self.evaluate(member) for member in self.population]
        return list(self.costs)

    def _vary(self, child: Assignment) -> np.ndarray:
        if self.rng.random() < self.cfg.mutation_rate:
            kind = MUTATIONS[int(self.rng.choice(len(MUTATIONS), p=self.mutation_weights))]
            child = mutate(child, kind, self.rng)
        return child.as_array()

    def step(self, iteration: int) -> list[Cost]:
        elite = int(np.argmin(self.costs))
        offspring = [self.population[elite]]
        offspring_costs = [self.costs[elite]]

        while len(offspring) < self.cfg.population_size:
            first = Assignment.trusted(self.population[roulette_select(self.costs, self.rng)])
            second = Assignment.trusted(self.population[roulette_select(self.costs, self.rng)])
            if self.rng.random() < self.cfg.crossover_rate:
                first, second = mox_crossover(first, second, self.rng)

            for child in (first, second):
                if len(offspring) == self.cfg.population_size:
                    break
                perm = self._vary(child)
                offspring.append(perm)
                offspring_costs.append(self.evaluate(perm))

        self.population, self.costs = offspring, offspring_costs
        return list(offspring_costs)
