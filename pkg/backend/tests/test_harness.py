import numpy as np
import pytest

from app.exceptions import SafetyViolation, WorkloadError
from app.services.activity import ActivityKind
from app.services.checker import GaOccurrence, SatisfactionEvent
from app.services.harness import (
    GroundTruth,
    ScenarioParams,
    Transition,
    UserCycle,
    ZoneStay,
    apply_update_interval,
    generate_workload,
    next_tick,
    physical_oracle,
    probability,
    retained_changes,
    run_experiment,
    simulate,
    zone_gateways,
)
from conftest import IV

DAY = 24 * 3600.0


def fixed_stays(ga_id: int) -> float:
    return 600.0 if ga_id == 1 else 300.0


def occurrence(ga_id: int, owner: int, phys_lo: float, phys_hi: float, ordinal: int = 1) -> GaOccurrence:
    iv = IV(owner, [1, 0], [2, 0], phys_lo=phys_lo, phys_hi=phys_hi)
    return GaOccurrence(ga_id, ActivityKind.AND, (iv.lo,), (iv.hi,), (iv,), ordinal)


def satisfaction(ordinal: int, *spans) -> SatisfactionEvent:
    return SatisfactionEvent(ordinal, tuple(
        occurrence(ga_id, ga_id, lo, hi, ordinal) for ga_id, (lo, hi) in enumerate(spans, start=1)
    ))


class TestScenarioParams:
    def test_defaults(self):
        params = ScenarioParams()
        assert params.mean_stay_in == 600.0
        assert params.mean_stay_out == 300.0
        assert params.update_interval == 1.0
        assert params.mean_delay == 0.06
        assert params.min_stay == 120.0
        assert params.transit_time == 300.0

    @pytest.mark.parametrize("name,value", [
        ("mean_delay", 0.0),
        ("mean_stay_in", -1.0),
        ("mean_stay_out", 120.0),
        ("min_stay", 600.0),
        ("update_interval", -5.0),
        ("lifetime", -1.0),
    ])
    def test_out_of_range_rejected(self, name, value):
        with pytest.raises(ValueError):
            ScenarioParams().with_value(name, value)

    def test_unknown_field_rejected(self):
        with pytest.raises(ValueError):
            ScenarioParams(stay=3)


class TestWorkload:
    def test_zero_lifetime(self, smart_lock):
        truth, transitions = generate_workload(ScenarioParams(lifetime=0.0), smart_lock)
        assert transitions == []
        assert truth.num_phy == 0

    def test_fixed_durations(self, smart_lock):
        params = ScenarioParams(lifetime=9000.0, transit_time=0.0)
        truth, transitions = generate_workload(params, smart_lock, durations=fixed_stays)
        assert truth.num_phy == 10
        assert len(transitions) == 10 * 2 * 4
        assert truth.complete_cycles[0].stays == (ZoneStay(1, 0.0, 600.0), ZoneStay(2, 600.0, 900.0))

    def test_down_sorted_before_up_at_same_time(self, smart_lock):
        params = ScenarioParams(lifetime=900.0, transit_time=0.0)
        _, transitions = generate_workload(params, smart_lock, durations=fixed_stays)
        at_600 = [(t.pid, t.up) for t in transitions if t.time == 600.0]
        assert at_600 == [(1, False), (2, False), (3, True), (4, True)]

    def test_stay_beyond_lifetime_emits_nothing(self, smart_lock):
        params = ScenarioParams(lifetime=800.0, transit_time=0.0)
        truth, transitions = generate_workload(params, smart_lock, durations=fixed_stays)
        assert truth.num_phy == 0
        assert all(t.pid in (1, 2) for t in transitions)
        assert len(truth.cycles) == 1

    def test_transit_separates_zones(self, smart_lock):
        params = ScenarioParams(lifetime=2000.0, transit_time=10.0)
        truth, _ = generate_workload(params, smart_lock, durations=fixed_stays)
        first = truth.cycles[0]
        assert first.stays[1].entry == 610.0
        assert truth.cycles[1].start == 920.0

    def test_cycle_count_matches_mean_cycle_length(self, smart_lock):
        expected = 20 * DAY / 900.0
        counts = [
            generate_workload(ScenarioParams(transit_time=0.0, seed=seed), smart_lock)[0].num_phy
            for seed in range(10)
        ]
        assert abs(np.mean(counts) - expected) < 0.1 * expected

    def test_default_cycle_includes_two_walks(self, smart_lock):
        truth, _ = generate_workload(ScenarioParams(seed=5), smart_lock)
        expected = 20 * DAY / (600.0 + 300.0 + 2 * 300.0)
        assert abs(truth.num_phy - expected) < 0.1 * expected
        for before, after in zip(truth.cycles, truth.cycles[1:]):
            assert after.stays[0].entry - before.stays[1].exit == pytest.approx(300.0)

    def test_no_stay_shorter_than_min_stay(self, smart_lock):
        truth, _ = generate_workload(ScenarioParams(lifetime=5 * DAY, seed=6), smart_lock)
        stays = [stay for cycle in truth.cycles for stay in cycle.stays]
        assert min(stay.exit - stay.entry for stay in stays) >= 120.0

    def test_same_seed_same_workload(self, smart_lock):
        params = ScenarioParams(lifetime=DAY, seed=4)
        assert generate_workload(params, smart_lock)[1] == generate_workload(params, smart_lock)[1]


class TestSensors:
    def test_next_tick(self):
        assert next_tick(100.0, 0.0, 60.0) == 120.0
        assert next_tick(120.0, 0.0, 60.0) == 120.0
        assert next_tick(100.0, 50.0, 60.0) == 110.0
        assert next_tick(37.25, 3.0, 0.0) == 37.25

    def test_ideal_sensor_is_identity(self):
        schedule = [Transition(1.5, 1, True), Transition(2.5, 1, False)]
        observed = apply_update_interval(schedule, 0.0, seed=0)
        assert [(o.time, o.up) for o in observed.transitions] == [(1.5, True), (2.5, False)]
        assert observed.overwritten == 0

    def test_negative_interval_rejected(self):
        with pytest.raises(WorkloadError):
            apply_update_interval([], -1.0, seed=0)

    def test_change_replayed_one_period_late(self):
        observed = apply_update_interval([Transition(100.0, 1, True)], 60.0, seed=0, phase=0.0)
        assert [(o.time, o.true_time) for o in observed.transitions] == [(160.0, 100.0)]
        assert observed.transitions[0].time >= next_tick(100.0, 0.0, 60.0)

    @pytest.mark.parametrize("count,buffer_size,kept", [
        (0, 2, 0), (1, 2, 1), (2, 2, 2), (3, 2, 1), (4, 2, 2), (5, 2, 1),
        (1, 1, 1), (2, 1, 0), (3, 1, 1), (6, 3, 3), (7, 3, 3), (8, 3, 2),
    ])
    def test_retained_changes(self, count, buffer_size, kept):
        assert retained_changes(count, buffer_size) == kept

    def test_buffer_keeps_last_pulse(self):
        schedule = [
            Transition(10.0, 1, True), Transition(20.0, 1, False),
            Transition(30.0, 1, True), Transition(40.0, 1, False),
        ]
        observed = apply_update_interval(schedule, 60.0, seed=0, phase=0.0)
        assert [(o.time, o.up) for o in observed.transitions] == [(90.0, True), (100.0, False)]
        assert observed.overwritten == 2

    def test_buffer_reports_final_state_of_odd_batch(self):
        schedule = [Transition(10.0, 1, True), Transition(20.0, 1, False), Transition(30.0, 1, True)]
        observed = apply_update_interval(schedule, 60.0, seed=0, phase=0.0)
        assert [(o.time, o.up) for o in observed.transitions] == [(90.0, True)]
        assert observed.overwritten == 2

    def test_change_on_a_tick_closes_that_period(self):
        schedule = [Transition(10.0, 1, True), Transition(20.0, 1, False), Transition(60.0, 1, True)]
        observed = apply_update_interval(schedule, 60.0, seed=0, phase=0.0)
        assert [o.true_time for o in observed.transitions] == [60.0]
        assert observed.overwritten == 2

    def test_reported_state_at_every_tick_is_true_state(self):
        rng = np.random.default_rng(3)
        times = np.sort(rng.uniform(0, 10000, size=200))
        schedule = [Transition(float(t), 1, i % 2 == 0) for i, t in enumerate(times)]
        observed = apply_update_interval(schedule, 60.0, seed=3)
        phase = observed.phases[1]
        assert 0.0 <= phase < 60.0
        assert observed.overwritten > 0

        def state_at(events, t):
            ups = [e.up for e in events if e.time <= t]
            return ups[-1] if ups else False

        for k in range(1, 170):
            tick = phase + k * 60.0
            assert state_at(observed.transitions, tick + 60.0) == state_at(schedule, tick)
        for o in observed.transitions:
            assert o.time == o.true_time + 60.0

    def test_sensors_of_one_gateway_share_a_phase(self):
        schedule = [Transition(t, pid, up) for pid in (1, 2, 3) for t, up in ((100.0, True), (700.0, False))]
        observed = apply_update_interval(schedule, 600.0, seed=9, groups={1: 1, 2: 1, 3: 2})
        assert set(observed.phases) == {1, 2}
        assert all(0.0 <= phase < 600.0 for phase in observed.phases.values())

    def test_zone_gateways(self, smart_lock):
        assert zone_gateways(smart_lock) == {1: 1, 2: 1, 3: 2, 4: 2}

    def test_long_periods_keep_isolated_stays_intact(self):
        rng = np.random.default_rng(11)
        schedule = []
        now = 0.0
        for _ in range(500):
            start = now + 11000.0 + float(rng.uniform(0.0, 5400.0))
            end = start + float(rng.exponential(300.0))
            schedule += [Transition(start, 1, True), Transition(end, 1, False)]
            now = end
        observed = apply_update_interval(schedule, 5400.0, seed=11)
        assert observed.overwritten == 0
        pairs = zip(observed.transitions[::2], observed.transitions[1::2])
        for up, down in pairs:
            assert up.up and not down.up
            assert down.time - up.time == pytest.approx(down.true_time - up.true_time)

    def test_stays_shorter_than_the_period_overwritten(self):
        schedule = []
        for k in range(100):
            start = k * 900.0
            schedule += [Transition(start + 1.0, 1, True), Transition(start + 300.0, 1, False)]
        observed = apply_update_interval(schedule, 5400.0, seed=0, phase=0.0)
        # six stays per period, only the last one is reported
        assert len(observed.transitions) == 2 * 17
        assert observed.overwritten == 200 - 2 * 17


class TestOracle:
    def ordered_truth(self):
        return GroundTruth(lifetime=1000.0, cycles=[
            UserCycle(1, (ZoneStay(1, 0.0, 300.0), ZoneStay(2, 310.0, 400.0))),
        ])

    def test_one_cycle_one_satisfaction(self):
        verdict = physical_oracle(self.ordered_truth(), [satisfaction(1, (0.0, 300.0), (310.0, 400.0))])
        assert verdict.num_phy == 1
        assert verdict.matches == [(1, 1)]
        assert verdict.safe
        verdict.assert_safe()

    def test_overlapping_stays_not_counted(self):
        truth = GroundTruth(lifetime=1000.0, cycles=[
            UserCycle(1, (ZoneStay(1, 0.0, 300.0), ZoneStay(2, 250.0, 400.0))),
        ])
        assert truth.num_phy == 0

    def test_cycle_cut_by_lifetime_not_counted(self):
        truth = GroundTruth(lifetime=350.0, cycles=self.ordered_truth().cycles)
        assert truth.num_phy == 0

    def test_unmatched_satisfaction_is_a_violation(self):
        truth = GroundTruth(lifetime=1000.0)
        verdict = physical_oracle(truth, [satisfaction(1, (0.0, 300.0), (310.0, 400.0))])
        assert verdict.unmatched == [1]
        assert not verdict.safe
        with pytest.raises(SafetyViolation):
            verdict.assert_safe()

    def test_satisfaction_before_cycle_completes_is_unmatched(self):
        verdict = physical_oracle(self.ordered_truth(), [satisfaction(1, (0.0, 100.0), (200.0, 250.0))])
        assert verdict.unmatched == [1]

    def test_misordered_chain(self):
        verdict = physical_oracle(self.ordered_truth(), [satisfaction(1, (0.0, 320.0), (310.0, 400.0))])
        assert verdict.misordered == [1]
        assert verdict.false_orderings == 1

    def test_two_satisfactions_cannot_share_a_cycle(self):
        events = [
            satisfaction(1, (0.0, 300.0), (310.0, 400.0)),
            satisfaction(2, (0.0, 300.0), (320.0, 400.0)),
        ]
        verdict = physical_oracle(self.ordered_truth(), events)
        assert verdict.matches == [(1, 1)]
        assert verdict.unmatched == [2]


class TestExperiment:
    def test_probability_helper(self):
        assert probability(3, 4) == 0.75
        assert probability(0, 0) == 0.0

    def test_fast_sensors_order_almost_everything(self, smart_lock):
        result = run_experiment(ScenarioParams(lifetime=2 * DAY, update_interval=1.0, seed=0), smart_lock)
        assert result.num_phy > 90
        assert result.probability >= 0.95
        assert result.false_orderings == 0

    def test_slow_sensors_lower_probability(self, smart_lock):
        fast = run_experiment(ScenarioParams(lifetime=2 * DAY, update_interval=1.0, seed=1), smart_lock)
        slow = run_experiment(ScenarioParams(lifetime=2 * DAY, update_interval=5400.0, seed=1), smart_lock)
        assert slow.probability < fast.probability
        assert slow.overwritten_changes > 0
        assert fast.overwritten_changes == 0

    @pytest.mark.parametrize("update_interval", [60.0, 600.0])
    def test_intervals_below_the_shortest_cycle_lose_nothing(self, smart_lock, update_interval):
        base = ScenarioParams(lifetime=2 * DAY, seed=3)
        ideal = run_experiment(base, smart_lock)
        coarse = run_experiment(base.with_value("update_interval", update_interval), smart_lock)
        assert coarse.overwritten_changes == 0
        assert coarse.num_phy == ideal.num_phy
        assert ideal.num_oga - 1 <= coarse.num_oga <= ideal.num_oga

    def test_deterministic(self, smart_lock):
        params = ScenarioParams(lifetime=DAY, update_interval=60.0, mean_delay=6.0, seed=7)
        assert run_experiment(params, smart_lock) == run_experiment(params, smart_lock)

    @pytest.mark.parametrize("update_interval", [1.0, 600.0, 5400.0])
    @pytest.mark.parametrize("mean_delay", [0.06, 60.0])
    def test_never_reports_unordered_cycles(self, smart_lock, update_interval, mean_delay):
        params = ScenarioParams(lifetime=DAY, update_interval=update_interval, mean_delay=mean_delay, seed=2)
        run = simulate(params, smart_lock)
        assert run.verdict.safe
        assert run.result.num_oga <= run.result.num_phy

    def test_zero_lifetime_reports_nothing(self, smart_lock):
        result = run_experiment(ScenarioParams(lifetime=0.0), smart_lock)
        assert (result.num_oga, result.num_phy, result.probability) == (0, 0, 0.0)
