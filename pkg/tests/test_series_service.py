import csv

import numpy as np
import pytest
from conftest import make_trace

from src.exceptions import InsufficientDataError
from src.services.series_service import emit_series, rolling_variance


def read(path):
    with path.open(newline="") as f:
        return list(csv.reader(f))


def test_rolling_variance_of_constant_series_is_zero():
    assert np.array_equal(rolling_variance([4.0] * 60), np.zeros(11))


def test_rolling_variance_hand_values():
    assert rolling_variance([1.0, 3.0, 5.0, 5.0], window=2).tolist() == [1.0, 1.0, 0.0]


def test_short_series_has_no_windows():
    assert rolling_variance([1.0, 2.0], window=3).size == 0


def test_hundred_iteration_trace(tmp_path):
    trace = make_trace([100.0 - i for i in range(100)], lams=[0.5] * 100, spread=2.0)
    paths = emit_series(trace, tmp_path, "rand6__ga__r001")
    assert [p.name for p in paths] == [
        "rand6__ga__r001_convergence.csv",
        "rand6__ga__r001_efficiency.csv",
        "rand6__ga__r001_variance.csv",
    ]

    convergence = read(paths[0])
    assert convergence[0] == ["iteration", "best", "mean", "worst"]
    assert len(convergence) == 101
    assert convergence[1] == ["1", "100.0", "102.0", "104.0"]

    efficiency = read(paths[1])
    assert {row[1] for row in efficiency[1:]} == {"0.5"}

    variance = read(paths[2])[1:]
    assert [int(row[0]) for row in variance] == list(range(50, 101))
    # any 50 consecutive integers have population variance (50**2 - 1) / 12
    assert float(variance[0][1]) == pytest.approx((50**2 - 1) / 12)


def test_values_pass_through_unchanged(tmp_path):
    trace = make_trace([0.1 + 0.2, 1 / 3], lams=[1e-7, 2e-7])
    convergence = read(emit_series(trace, tmp_path, "run")[0])
    assert float(convergence[1][1]) == 0.1 + 0.2
    assert float(convergence[2][1]) == 1 / 3


def test_empty_trace_is_rejected(tmp_path):
    with pytest.raises(InsufficientDataError):
        emit_series([], tmp_path, "empty")
