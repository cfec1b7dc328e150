"""
Full-lifetime sweeps over ten seeds of the smart-lock scenario.

Slow: run with ``python -m pytest tests/test_acceptance.py -m slow``.
"""
import pytest

from app.services.activity import SMART_LOCK_CONSTRAINT, parse_constraint
from app.services.harness import ScenarioParams
from app.services.reporting import SweepAxis, total_decline
from app.worker import SweepWorker

pytestmark = pytest.mark.slow

SEEDS = list(range(10))
UPDATE_INTERVALS = [1, 60, 300, 600, 1200, 2400, 3600, 5400]
MEAN_DELAYS = [0.06, 0.6, 6, 60, 120, 300]
MEAN_STAYS = [300, 600, 900, 1800, 3000]


def _sweep(axis: SweepAxis, grid) -> SweepWorker:
    worker = SweepWorker(
        parse_constraint(SMART_LOCK_CONSTRAINT), ScenarioParams(), axis, grid, SEEDS, max_workers=4
    )
    worker.run()
    return worker


@pytest.fixture(scope="module")
def interval_sweep():
    return _sweep(SweepAxis.UPDATE_INTERVAL, UPDATE_INTERVALS)


@pytest.fixture(scope="module")
def delay_sweep():
    return _sweep(SweepAxis.MEAN_DELAY, MEAN_DELAYS)


@pytest.fixture(scope="module")
def stay_sweep():
    return _sweep(SweepAxis.MEAN_STAY, MEAN_STAYS)


def _means(worker: SweepWorker):
    return {agg.axis_value: agg.mean_probability for agg in worker.aggregates()}


def test_update_intervals_up_to_the_office_stay(interval_sweep):
    means = _means(interval_sweep)
    for value in (1.0, 60.0, 300.0, 600.0):
        assert means[value] > 0.90, means


def test_ninety_minute_interval(interval_sweep):
    means = _means(interval_sweep)
    assert 0.05 <= means[5400.0] <= 0.35, means
    assert means[5400.0] < means[1200.0]


def test_delay_threshold(delay_sweep):
    means = _means(delay_sweep)
    for value in (0.06, 0.6):
        assert means[value] >= 0.95, means
    for value in (6.0, 60.0):
        assert means[value] >= 0.8, means


@pytest.mark.parametrize("sweep", ["interval_sweep", "delay_sweep"])
def test_probability_falls_with_asynchrony(request, sweep):
    worker = request.getfixturevalue(sweep)
    assert worker.correlation() <= -0.9


def test_stay_duration_matters_least(interval_sweep, delay_sweep, stay_sweep):
    stay = abs(total_decline(stay_sweep.aggregates()))
    assert stay < total_decline(interval_sweep.aggregates())
    assert stay < total_decline(delay_sweep.aggregates())


@pytest.mark.parametrize("sweep", ["interval_sweep", "delay_sweep", "stay_sweep"])
def test_no_false_orderings(request, sweep):
    worker = request.getfixturevalue(sweep)
    assert all(row.result.false_orderings == 0 for row in worker.rows)
