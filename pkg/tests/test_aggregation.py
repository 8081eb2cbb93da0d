import pytest
from conftest import make_result, random_instance

from src.exceptions import InsufficientDataError
from src.metrics.aggregation import aggregate_replications, run_levels
from src.models.results import EfficiencyMeasure
from src.models.solver_config import Algorithm, SolverConfig
from src.solvers import run


def test_run_levels_use_final_iteration():
    result = make_result([30.0, 20.0, 25.0], spread=5.0)
    assert run_levels(result) == (20.0, 30.0, 35.0)


def test_single_replication_has_zero_variance():
    result = make_result([12.0, 10.0], lams=[1.0, 2.0], spread=1.0)
    stats = aggregate_replications([result])
    assert (stats.mean_best, stats.mean_avg, stats.mean_worst) == run_levels(result)
    assert (stats.var_best, stats.var_avg, stats.var_worst) == (0.0, 0.0, 0.0)
    assert stats.best_objective == 10.0
    assert stats.replications == 1


def test_two_replications_hand_values():
    stats = aggregate_replications([make_result([10.0]), make_result([14.0])])
    assert stats.mean_best == 12.0
    assert stats.var_best == 4.0
    assert stats.best_objective == 10.0


def test_same_seed_replications_have_zero_variance():
    inst = random_instance(6, 2)
    cfg = SolverConfig(algorithm=Algorithm.GA, max_iterations=20, population_size=8, seed=11)
    stats = aggregate_replications([run(inst, cfg) for _ in range(3)])
    assert (stats.var_best, stats.var_avg, stats.var_worst) == (0.0, 0.0, 0.0)


def test_aggregating_twice_gives_the_same_statistics():
    results = [make_result([5.0, 4.0], spread=2.0), make_result([6.0, 3.0], spread=1.0)]
    assert aggregate_replications(results) == aggregate_replications(results)


@pytest.mark.parametrize(
    "measure, expected",
    [(EfficiencyMeasure.MIN, 1.5), (EfficiencyMeasure.MEAN, 2.5), (EfficiencyMeasure.MAX, 3.5)],
)
def test_efficiency_measure(measure, expected):
    results = [make_result([9.0] * 3, lams=[50.0, 1.0, 3.0]), make_result([9.0] * 3, lams=[50.0, 2.0, 4.0])]
    assert aggregate_replications(results, measure).efficiency == pytest.approx(expected)


def test_efficiency_skips_single_iteration_runs():
    stats = aggregate_replications([make_result([9.0]), make_result([9.0, 9.0], lams=[1.0, 0.5])])
    assert stats.efficiency == pytest.approx(0.5)
    assert aggregate_replications([make_result([9.0])]).efficiency is None


def test_total_time_is_mean_wall_time():
    stats = aggregate_replications([make_result([1.0], lams=[2.0]), make_result([1.0], lams=[4.0])])
    assert stats.total_time == pytest.approx(3.0)


def test_empty_input_is_insufficient():
    with pytest.raises(InsufficientDataError):
        aggregate_replications([])
