import csv
import json

import pytest
from conftest import make_result

from src.models.experiment import CellFailure, ReportFormat, RunRecord
from src.models.results import GoodnessOfFit
from src.models.solver_config import Algorithm, DetectorSettings
from src.services.report_service import (
    HALF_COLUMN,
    TABLE1_COLUMNS,
    TABLE2_COLUMNS,
    ReportService,
    cached_lookup,
    name_lookup,
)

DETECTOR = DetectorSettings(window=3, threshold=0.01, target=2)


def record(instance: str, algorithm: Algorithm, replication: int, bests, lams=None, spread=0.0) -> RunRecord:
    return RunRecord(
        instance=instance,
        algorithm=algorithm,
        replication=replication,
        seed=replication,
        result=make_result(bests, lams, spread),
    )


@pytest.fixture
def lookup(tiny):
    return name_lookup({"a": tiny, "b": tiny})


@pytest.fixture
def records():
    return [
        record("b", Algorithm.GA, 1, [9.0, 6.0]),
        record("a", Algorithm.SA, 2, [6.0] * 8, lams=[0.5] * 8, spread=1.0),
        record("a", Algorithm.SA, 1, [6.0] * 8, lams=[0.25] * 8, spread=3.0),
        record("a", Algorithm.GA, 1, [7.0, 6.0, 6.0]),
    ]


def service(tmp_path, **kwargs) -> ReportService:
    return ReportService(tmp_path / "reports", DETECTOR, **kwargs)


def test_verify_replaces_stored_best_with_recomputed_cost(tmp_path, tiny, caplog):
    stale = record("a", Algorithm.GA, 1, [5.0, 8.0])
    verified, failures = service(tmp_path).verify([stale], name_lookup({"a": tiny}))
    assert failures == []
    assert verified[0].result.best_cost == 6
    assert "evaluates to 6" in caplog.text


def test_verify_reports_records_without_instance(tmp_path, tiny):
    verified, failures = service(tmp_path).verify([record("zzz", Algorithm.GA, 1, [6.0])], name_lookup({"a": tiny}))
    assert verified == []
    assert failures[0].instance == "zzz"
    assert failures[0].error.startswith("KeyError")


def test_groups_sorted_by_instance_then_algorithm(tmp_path, records):
    groups = service(tmp_path).build(records)
    assert [(g.row.instance, str(g.row.algorithm)) for g in groups] == [("a", "ga"), ("a", "sa"), ("b", "ga")]
    assert [r.replication for r in groups[1].records] == [1, 2]


def test_group_statistics(tmp_path, records):
    sa = service(tmp_path).build(records)[1]
    assert sa.row.replications == 2
    assert sa.row.mean_best == 6.0
    assert sa.row.mean_avg == pytest.approx(8.0)
    assert sa.row.var_avg == pytest.approx(1.0)
    assert sa.row.var_worst == pytest.approx(4.0)
    assert sa.row.efficiency == pytest.approx(0.375)
    assert sa.convergence.converged_runs == 2
    assert sa.convergence.iterations.mean == 5


def test_table1_columns_with_half_count(tmp_path, records):
    reports = service(tmp_path, half_count=True)
    assert reports.table1_columns == (*TABLE1_COLUMNS[:3], HALF_COLUMN, *TABLE1_COLUMNS[3:])
    rows = reports.table1_rows(reports.build(records))
    assert rows[0][HALF_COLUMN] == 3.0
    assert list(rows[0]) == list(reports.table1_columns)


def test_written_tables(tmp_path, records, lookup):
    reports = service(tmp_path)
    reports.report(records, lookup)
    out = tmp_path / "reports"

    with (out / "table1.csv").open(newline="") as f:
        table1 = list(csv.DictReader(f))
    assert [row["algorithm"] for row in table1] == ["ga", "sa", "ga"]
    assert "efficiency" not in table1[0]

    with (out / "table2.csv").open(newline="") as f:
        table2 = list(csv.DictReader(f))
    assert list(table2[0]) == list(TABLE2_COLUMNS)
    # two-iteration runs cannot converge with a window of three
    assert table2[2]["iterations_mean"] == ""

    doc = json.loads((out / "table1.json").read_text())
    assert doc["columns"] == list(TABLE1_COLUMNS)
    assert doc["rows"][1]["best_objective"] == 6
    assert not (out / "failures.json").exists()


def test_timing_sidecar(tmp_path, records, lookup):
    service(tmp_path).report(records, lookup)
    timing = json.loads((tmp_path / "reports" / "timing.json").read_text())
    assert "generated_at" in timing
    ga_b = timing["groups"][2]
    assert ga_b["lambda"]["min"] == pytest.approx(0.01)
    assert "insufficient data" in ga_b["robustness"]["error"]
    sa = timing["groups"][1]
    assert sa["lambda"]["max"] == 0.5
    assert [run["meeting_iteration"] for run in sa["runs"]] == [None, None]
    assert (tmp_path / "reports" / "table1_timing.csv").exists()

    with (tmp_path / "reports" / "table1_timing.csv").open(newline="") as f:
        rows = list(csv.DictReader(f))
    assert float(rows[1]["efficiency"]) == pytest.approx(0.375)
    assert "time" in rows[1]
    assert "runtime_mean" in rows[1]
    assert not any(column.startswith("runtime") for column in TABLE2_COLUMNS)


def test_meeting_iteration_in_timing(tmp_path):
    converging = record("a", Algorithm.GA, 1, [6.0, 6.0, 6.0], lams=[1.0, 2.0, 4.0])
    entry = service(tmp_path).timing_entry(service(tmp_path).build([converging])[0])
    assert entry["runs"][0]["meeting_iteration"] == 1
    assert entry["runs"][0]["meeting_time"] == 1.0


def test_json_only_reports(tmp_path, records, lookup):
    service(tmp_path, formats=[ReportFormat.JSON]).report(records, lookup)
    names = sorted(p.name for p in (tmp_path / "reports").iterdir())
    assert names == ["table1.json", "table2.json", "timing.json"]


def test_failures_are_written_and_cleared(tmp_path, records, lookup):
    failure = CellFailure(instance="a", algorithm=Algorithm.HS, replication=1, error="boom")
    _, failures = service(tmp_path).report(records, lookup, [failure])
    path = tmp_path / "reports" / "failures.json"
    assert failures == [failure]
    assert json.loads(path.read_text())[0]["error"] == "boom"

    service(tmp_path).report(records, lookup)
    assert not path.exists()


def test_reports_are_reproducible(tmp_path, records, lookup):
    service(tmp_path).report(records, lookup)
    first = {p.name: p.read_bytes() for p in (tmp_path / "reports").glob("table*")}
    service(tmp_path).report(list(reversed(records)), lookup)
    second = {p.name: p.read_bytes() for p in (tmp_path / "reports").glob("table*")}
    assert first.keys() == second.keys()
    assert {k: v for k, v in first.items() if "timing" not in k} == {
        k: v for k, v in second.items() if "timing" not in k
    }


def test_robustness_ranking_skips_errors():
    flat = GoodnessOfFit(statistic=0.0, p_value=1.0, bins=2, degenerate=True).model_dump()
    skewed = GoodnessOfFit(statistic=9.0, p_value=0.01, bins=4).model_dump()
    entries = [
        {"instance": "a", "algorithm": "ga", "robustness": skewed},
        {"instance": "a", "algorithm": "sa", "robustness": flat},
        {"instance": "a", "algorithm": "hs", "robustness": {"error": "insufficient data"}},
    ]
    assert ReportService.robustness_ranking(entries) == {"a": ["sa", "ga"]}


def test_cached_lookup_loads_each_file_once(tmp_path, tiny):
    calls = []

    def load(path, swap):
        calls.append((path, swap))
        return tiny

    lookup = cached_lookup(load)
    stored = record("a", Algorithm.GA, 1, [6.0]).model_copy(update={"instance_path": tmp_path / "a.dat"})
    assert lookup(stored) is tiny
    assert lookup(stored) is tiny
    assert calls == [(tmp_path / "a.dat", False)]


def test_cached_lookup_needs_instance_path(tiny):
    with pytest.raises(KeyError):
        cached_lookup(lambda path, swap: tiny)(record("a", Algorithm.GA, 1, [6.0]))
