import math

import pytest

from app.exceptions import WorkloadError
from app.services.harness import ExperimentResult, ScenarioParams
from app.services.reporting import (
    AggregateRow,
    SweepAxis,
    SweepRow,
    aggregate,
    plot_sweep,
    rank_correlation,
    read_aggregates,
    render_csv,
    total_decline,
    write_csv,
)
from app.worker import SweepWorker

HOURS_6 = 6 * 3600.0


def row(value, seed, oga, phy):
    return SweepRow(value, seed, ExperimentResult(num_oga=oga, num_phy=phy, probability=oga / phy, seed=seed))


def agg(value, mean):
    return AggregateRow(value, 1, 0.0, 0.0, mean, 0.0)


class TestAggregate:
    def test_mean_and_sample_std(self):
        rows = [row(60.0, 0, 9, 10), row(60.0, 1, 7, 10), row(1.0, 0, 10, 10)]
        first, second = aggregate(rows)
        assert first.axis_value == 1.0 and first.runs == 1 and first.std_probability == 0.0
        assert second.mean_probability == pytest.approx(0.8)
        assert second.std_probability == pytest.approx(math.sqrt(0.02))
        assert second.mean_num_oga == 8.0

    def test_rank_correlation(self):
        falling = [agg(1, 0.99), agg(60, 0.9), agg(600, 0.8), agg(5400, 0.3)]
        assert rank_correlation(falling) == pytest.approx(-1.0)
        assert total_decline(falling) == pytest.approx(0.69)

    def test_rank_correlation_undefined(self):
        assert math.isnan(rank_correlation([agg(1, 0.5)]))
        assert math.isnan(rank_correlation([agg(1, 0.5), agg(2, 0.5)]))
        assert total_decline([]) == 0.0


class TestCsv:
    def test_layout(self):
        text = render_csv([row(600.0, 1, 8, 10), row(1.0, 0, 10, 10), row(600.0, 0, 9, 10)])
        lines = text.splitlines()
        assert lines[0] == "axis_value,seed,num_oga,num_phy,probability,std"
        assert lines[1] == "1,0,10,10,1.000000,"
        assert lines[2] == "600,0,9,10,0.900000,"
        assert lines[3] == "600,1,8,10,0.800000,"
        assert lines[4] == "1,mean,10.000,10.000,1.000000,0.000000"
        assert lines[5].startswith("600,mean,8.500,10.000,0.850000,")

    def test_fractional_axis_values(self):
        assert render_csv([row(0.06, 0, 1, 1)]).splitlines()[1].startswith("0.06,0,")

    def test_aggregates_read_back(self, tmp_path):
        rows = [row(1.0, 0, 10, 10), row(60.0, 0, 9, 10), row(60.0, 1, 8, 10)]
        path = write_csv(tmp_path / "out" / "sweep.csv", rows)
        back = read_aggregates(path)
        assert [a.axis_value for a in back] == [1.0, 60.0]
        assert back[1].mean_probability == pytest.approx(0.85)


def test_plot_written(tmp_path):
    path = plot_sweep([agg(1, 0.99), agg(600, 0.8), agg(5400, 0.3)], SweepAxis.UPDATE_INTERVAL, tmp_path / "p.png")
    assert path.exists()
    assert path.stat().st_size > 0


class TestSweepWorker:
    def test_axis_fields(self):
        params = ScenarioParams()
        assert SweepAxis.UPDATE_INTERVAL.apply(params, 60).update_interval == 60.0
        assert SweepAxis.MEAN_DELAY.apply(params, 6).mean_delay == 6.0
        assert SweepAxis.MEAN_STAY.apply(params, 900).mean_stay_in == 900.0

    def test_empty_grid_or_seeds(self, smart_lock):
        with pytest.raises(WorkloadError):
            SweepWorker(smart_lock, ScenarioParams(), SweepAxis.UPDATE_INTERVAL, [], [0])
        with pytest.raises(WorkloadError):
            SweepWorker(smart_lock, ScenarioParams(), SweepAxis.UPDATE_INTERVAL, [1.0], [])

    def test_invalid_grid_value_fails_before_running(self, smart_lock):
        worker = SweepWorker(smart_lock, ScenarioParams(lifetime=HOURS_6), SweepAxis.MEAN_DELAY, [0.06, -1.0], [0])
        with pytest.raises(ValueError):
            worker.run()
        assert worker.rows == []

    def test_rows_cover_grid_and_seeds(self, smart_lock):
        worker = SweepWorker(
            smart_lock, ScenarioParams(lifetime=HOURS_6), SweepAxis.UPDATE_INTERVAL, [600, 1, 600], [1, 0], max_workers=3
        )
        rows = worker.run()
        assert [(r.axis_value, r.seed) for r in rows] == [(1.0, 0), (1.0, 1), (600.0, 0), (600.0, 1)]
        assert all(r.result.false_orderings == 0 for r in rows)
        assert [a.runs for a in worker.aggregates()] == [2, 2]

    def test_output_independent_of_worker_count(self, smart_lock):
        def csv_for(workers):
            worker = SweepWorker(
                smart_lock, ScenarioParams(lifetime=HOURS_6), SweepAxis.MEAN_DELAY, [0.06, 60.0], [0, 1, 2],
                max_workers=workers,
            )
            return render_csv(worker.run())

        assert csv_for(1) == csv_for(4)
