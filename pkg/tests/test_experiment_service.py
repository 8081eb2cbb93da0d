from pathlib import Path

import pytest
from conftest import random_instance, write_qaplib
from pydantic import ValidationError

from src.models.experiment import AlgorithmSpec, ExperimentConfig
from src.models.solver_config import Algorithm, DetectorSettings
from src.services import experiment_service
from src.services.experiment_service import (
    EXIT_OK,
    EXIT_PARTIAL,
    ExperimentService,
    replication_seed,
    splitmix64,
)
from src.services.report_service import ReportService, name_lookup
from src.solvers import run

FAST = {
    Algorithm.GA: {"max_iterations": 15, "population_size": 6},
    Algorithm.SA: {"max_iterations": 10, "moves_per_temperature": 10},
    Algorithm.LSH: {"max_iterations": 3},
}


def experiment(tmp_path: Path, algorithms=(Algorithm.GA, Algorithm.SA), **kwargs) -> ExperimentConfig:
    paths = [write_qaplib(tmp_path / f"rand{n}.dat", random_instance(n, n)) for n in (5, 6)]
    specs = [AlgorithmSpec(algorithm=a, overrides=FAST.get(a, {})) for a in algorithms]
    settings = {"replications": 2, "master_seed": 1234, "output_dir": tmp_path / "out", **kwargs}
    return ExperimentConfig(instances=paths, algorithms=specs, **settings)


def test_splitmix_reference_value():
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_replication_seeds_are_distinct_and_stable():
    seeds = [replication_seed(2**63 + 5, r) for r in range(1, 1001)]
    assert len(set(seeds)) == 1000
    assert all(0 <= s < 2**64 for s in seeds)
    assert replication_seed(0, 3) == splitmix64(3)


def test_seeds_do_not_depend_on_replication_count(tmp_path):
    service = ExperimentService(experiment(tmp_path, replications=3))
    longer = ExperimentService(experiment(tmp_path, replications=5))
    short_seeds = [t.seed for t in service.cells(service.load_instances())]
    long_seeds = [t.seed for t in longer.cells(longer.load_instances()) if t.replication <= 3]
    assert short_seeds == long_seeds


def test_cells_run_instance_then_algorithm_then_replication(tmp_path):
    service = ExperimentService(experiment(tmp_path))
    labels = [task.label for task in service.cells(service.load_instances())]
    assert labels == [
        "rand5/ga/r1",
        "rand5/ga/r2",
        "rand5/sa/r1",
        "rand5/sa/r2",
        "rand6/ga/r1",
        "rand6/ga/r2",
        "rand6/sa/r1",
        "rand6/sa/r2",
    ]


def test_run_stores_one_trace_per_cell(tmp_path):
    outcome = ExperimentService(experiment(tmp_path)).run()
    assert outcome.exit_status == EXIT_OK
    assert len(outcome.records) == 8
    assert set(outcome.instances) == {"rand5", "rand6"}
    traces = sorted(p.name for p in (tmp_path / "out" / "traces").iterdir())
    assert traces[0] == "rand5__ga__r001.trace"
    assert len(traces) == 8


def test_experiment_settings_reach_the_solver(tmp_path):
    detector = DetectorSettings(window=2, threshold=2.0, target=1)
    outcome = ExperimentService(
        experiment(tmp_path, algorithms=(Algorithm.LSH,), detector=detector, stop_on_convergence=True)
    ).run()
    for record in outcome.records:
        assert record.result.converged
        assert record.result.iterations_run == record.result.trigger_iteration
        assert record.seed == replication_seed(1234, record.replication)


def test_failing_cell_does_not_stop_the_others(tmp_path, monkeypatch, caplog):
    def flaky(instance, cfg):
        if cfg.algorithm == Algorithm.SA:
            raise RuntimeError("solver crashed")
        return run(instance, cfg)

    monkeypatch.setattr(experiment_service, "run", flaky)
    outcome = ExperimentService(experiment(tmp_path)).run()
    assert outcome.exit_status == EXIT_PARTIAL
    assert len(outcome.records) == 4
    assert {r.algorithm for r in outcome.records} == {Algorithm.GA}
    assert len(outcome.failures) == 4
    assert {f.algorithm for f in outcome.failures} == {Algorithm.SA}
    assert all(f.error == "RuntimeError: solver crashed" for f in outcome.failures)
    assert "rand5/sa/r1 failed" in caplog.text


def test_invalid_overrides_are_all_reported_before_running(tmp_path):
    specs = [
        AlgorithmSpec(algorithm=Algorithm.HS, overrides={"hms": 0}),
        AlgorithmSpec(algorithm=Algorithm.SA, overrides={"cooling_alpha": 5}),
        AlgorithmSpec(algorithm=Algorithm.PSO, overrides={"c1_end": 3.0}),
    ]
    with pytest.raises(ValidationError) as excinfo:
        ExperimentConfig(instances=[tmp_path / "rand5.dat"], algorithms=specs, output_dir=tmp_path / "out")
    message = str(excinfo.value)
    assert "hs: hms" in message
    assert "sa: cooling_alpha" in message
    assert "c1_end <= c1_start" in message
    assert not (tmp_path / "out").exists()


def test_missing_instance_aborts_before_any_cell(tmp_path):
    exp = experiment(tmp_path)
    exp = exp.model_copy(update={"instances": [*exp.instances, tmp_path / "absent.dat"]})
    with pytest.raises(FileNotFoundError):
        ExperimentService(exp).run()
    assert not (tmp_path / "out" / "traces").exists()


def write_tables(exp: ExperimentConfig) -> dict[str, bytes]:
    outcome = ExperimentService(exp).run()
    ReportService(exp.output_dir, exp.detector).report(outcome.records, name_lookup(outcome.instances))
    return {name: (exp.output_dir / name).read_bytes() for name in ("table1.csv", "table1.json", "table2.json")}


@pytest.mark.slow
def test_parallel_run_writes_identical_tables(tmp_path):
    serial = write_tables(experiment(tmp_path, output_dir=tmp_path / "serial", workers=1))
    parallel = write_tables(experiment(tmp_path, output_dir=tmp_path / "parallel", workers=8))
    assert serial == parallel
