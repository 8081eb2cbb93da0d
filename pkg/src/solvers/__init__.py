"""The seven QAP solvers behind one run contract."""

import logging
from typing import Optional

import numpy as np

from src.exceptions import ConfigurationError
from src.models.instance import QapInstance
from src.models.results import SolverResult
from src.models.solver_config import Algorithm, SolverConfig
from src.solvers.annealing import SimulatedAnnealingSolver
from src.solvers.base import Observer, Solver
from src.solvers.genetic import GeneticSolver
from src.solvers.grey_wolf import GreyWolfSolver
from src.solvers.harmony import HarmonySearchSolver
from src.solvers.local_search import LocalSearchSolver
from src.solvers.swarm import HybridSwarmSolver, ParticleSwarmSolver

logger = logging.getLogger(__name__)

SOLVERS: dict[Algorithm, type[Solver]] = {
    Algorithm.LSH: LocalSearchSolver,
    Algorithm.GA: GeneticSolver,
    Algorithm.PSO: ParticleSwarmSolver,
    Algorithm.GA_PSO: HybridSwarmSolver,
    Algorithm.GWO: GreyWolfSolver,
    Algorithm.HS: HarmonySearchSolver,
    Algorithm.SA: SimulatedAnnealingSolver,
}


def make_solver(inst: QapInstance, cfg: SolverConfig, rng: Optional[np.random.Generator] = None) -> Solver:
    try:
        solver_cls = SOLVERS[Algorithm(cfg.algorithm)]
    except (KeyError, ValueError):
        raise ConfigurationError(f"unknown algorithm {cfg.algorithm!r}") from None
    if cfg.max_iterations < 1:
        raise ConfigurationError(f"iteration budget must be at least 1, got {cfg.max_iterations}")
    return solver_cls(inst, cfg, rng if rng is not None else np.random.default_rng(cfg.seed))


def run(
    inst: QapInstance,
    cfg: SolverConfig,
    rng: Optional[np.random.Generator] = None,
    observer: Optional[Observer] = None,
) -> SolverResult:
    """Run the configured algorithm; identical (instance, config, seed) gives identical traces up to timing."""
    logger.debug(f"Running {cfg.algorithm} on {inst.name or '<unnamed>'} (n={inst.n})")
    return make_solver(inst, cfg, rng).run(observer)


def run_lsh(
    inst: QapInstance, cfg: SolverConfig, rng: np.random.Generator, observer: Optional[Observer] = None
) -> SolverResult:
    return LocalSearchSolver(inst, cfg, rng).run(observer)


def run_ga(
    inst: QapInstance, cfg: SolverConfig, rng: np.random.Generator, observer: Optional[Observer] = None
) -> SolverResult:
    return GeneticSolver(inst, cfg, rng).run(observer)


def run_pso(
    inst: QapInstance, cfg: SolverConfig, rng: np.random.Generator, observer: Optional[Observer] = None
) -> SolverResult:
    return ParticleSwarmSolver(inst, cfg, rng).run(observer)


def run_ga_pso(
    inst: QapInstance, cfg: SolverConfig, rng: np.random.Generator, observer: Optional[Observer] = None
) -> SolverResult:
    return HybridSwarmSolver(inst, cfg, rng).run(observer)


def run_gwo(
    inst: QapInstance, cfg: SolverConfig, rng: np.random.Generator, observer: Optional[Observer] = None
) -> SolverResult:
    return GreyWolfSolver(inst, cfg, rng).run(observer)


def run_hs(
    inst: QapInstance, cfg: SolverConfig, rng: np.random.Generator, observer: Optional[Observer] = None
) -> SolverResult:
    return HarmonySearchSolver(inst, cfg, rng).run(observer)


def run_sa(
    inst: QapInstance, cfg: SolverConfig, rng: np.random.Generator, observer: Optional[Observer] = None
) -> SolverResult:
    return SimulatedAnnealingSolver(inst, cfg, rng).run(observer)


__all__ = [
    "SOLVERS",
    "Observer",
    "Solver",
    "make_solver",
    "run",
    "run_ga",
    "run_ga_pso",
    "run_gwo",
    "run_hs",
    "run_lsh",
    "run_pso",
    "run_sa",
]
