"""
harness/selftest.py
===================
Oracle-equivalence suite: random small executions are run through the real
agents, network and checker, and the checker's detections and orderings
are compared with the transitive-closure reference in ``causality``.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from app.services.activity import ActivityKind, ConstraintSpec, GlobalActivitySpec
from app.services.checker import CheckerProcess
from app.services.simnet import MICROTRACE_STREAM, DelayModel, SimEvent, SimNet, stream
from .causality import EventGraph, reference_detections, reference_orderings, reported_intervals
from .experiment import build_agents

logger = logging.getLogger(__name__)

MAX_PROCESSES = 4
MAX_INTERVALS = 6
HORIZON = 100.0
MEAN_DELAYS = (0.5, 5.0, 50.0)


@dataclass
class MicroTrace:
    index: int
    constraint: ConstraintSpec
    mean_delay: float
    # pid -> [(up, down), ...]
    periods: Dict[int, List[Tuple[float, float]]]


@dataclass
class SelftestReport:
    traces: int = 0
    detections: int = 0
    satisfactions: int = 0
    mismatches: List[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.mismatches


def random_constraint(rng: np.random.Generator, n: int) -> ConstraintSpec:
    pids = [int(p) for p in rng.permutation(np.arange(1, n + 1))]
    m = int(rng.integers(1, min(n, 3) + 1))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, n), size=m - 1, replace=False)) if m > 1 else []
    groups = [pids[a:b] for a, b in zip([0] + cuts, cuts + [n])]
    return ConstraintSpec(tuple(
        GlobalActivitySpec(ga_id, ActivityKind.AND if rng.random() < 0.5 else ActivityKind.OR, tuple(sorted(g)))
        for ga_id, g in enumerate(groups, start=1)
    ))


def random_trace(seed: int, index: int) -> MicroTrace:
    rng = stream(seed, MICROTRACE_STREAM, index)
    n = int(rng.integers(2, MAX_PROCESSES + 1))
    constraint = random_constraint(rng, n)
    periods = {}
    for pid in range(1, n + 1):
        count = int(rng.integers(1, MAX_INTERVALS + 1))
        times = np.sort(rng.uniform(0.0, HORIZON, size=2 * count))
        periods[pid] = [(float(times[2 * i]), float(times[2 * i + 1])) for i in range(count)]
    mean_delay = float(MEAN_DELAYS[int(rng.integers(0, len(MEAN_DELAYS)))])
    return MicroTrace(index, constraint, mean_delay, periods)


def execute(trace: MicroTrace, seed: int) -> Tuple[SimNet, CheckerProcess]:
    agents = build_agents(trace.constraint)
    checker = CheckerProcess(trace.constraint)
    net = SimNet(agents, checker, DelayModel.exponential(trace.mean_delay), seed=seed, lifetime=math.inf)
    transitions = sorted(
        ((t, pid, up) for pid, spans in trace.periods.items() for span in spans for t, up in zip(span, (True, False))),
        key=lambda x: (x[0], x[2], x[1]),
    )
    net.run_until_quiescent(SimEvent.transition(t, pid, up) for t, pid, up in transitions)
    return net, checker


def compare(trace: MicroTrace, net: SimNet, checker: CheckerProcess) -> List[str]:
    problems = []
    graph = EventGraph(net.log)
    wrong = graph.clock_mismatches()
    if wrong:
        problems.append(f"trace {trace.index}: clock order disagrees with reachability on {wrong[:3]}")

    reported = reported_intervals(net.log)
    expected = {ga.ga_id: reference_detections(graph, ga, reported) for ga in trace.constraint}
    for ga in trace.constraint:
        got = [o for o in checker.occurrences if o.ga_id == ga.ga_id]
        got_keys = [o.keys for o in got]
        want_keys = [r.keys for r in expected[ga.ga_id]]
        if got_keys != want_keys:
            problems.append(f"trace {trace.index}: GA_{ga.ga_id} detections {got_keys} != reference {want_keys}")
            continue
        for occurrence, ref in zip(got, expected[ga.ga_id]):
            kept_lo = frozenset(iv.key for iv in occurrence.lo_intervals())
            kept_hi = frozenset(iv.key for iv in occurrence.hi_intervals())
            if kept_lo != frozenset(_owners_of(ref.kept_lo, ref.keys)):
                problems.append(f"trace {trace.index}: GA_{ga.ga_id} #{occurrence.ordinal} kept lo differs")
            if kept_hi != frozenset(_owners_of(ref.kept_hi, ref.keys)):
                problems.append(f"trace {trace.index}: GA_{ga.ga_id} #{occurrence.ordinal} kept hi differs")

    got_chains = [tuple((o.ga_id, o.ordinal) for o in s.occurrences) for s in checker.satisfactions]
    want_chains = reference_orderings(graph, trace.constraint, expected)
    if got_chains != want_chains:
        problems.append(f"trace {trace.index}: orderings {got_chains} != reference {want_chains}")
    return problems


def _owners_of(events, keys) -> List[Tuple[int, int]]:
    """Map kept events back to the (owner, seq) of the interval they bound."""
    seq_of = dict(keys)
    return [(pid, seq_of[pid]) for pid, _ in events]


def run_selftest(count: int = 1000, seed: int = 0) -> SelftestReport:
    report = SelftestReport()
    started = time.perf_counter()
    for index in range(count):
        trace = random_trace(seed, index)
        net, checker = execute(trace, seed + index)
        report.traces += 1
        report.detections += len(checker.occurrences)
        report.satisfactions += len(checker.satisfactions)
        problems = compare(trace, net, checker)
        for problem in problems:
            logger.error(problem)
        report.mismatches.extend(problems)
    report.elapsed = time.perf_counter() - started
    logger.info(
        f"Selftest: {report.traces} traces, {report.detections} detections, "
        f"{report.satisfactions} satisfactions, {len(report.mismatches)} mismatches "
        f"in {report.elapsed:.1f}s"
    )
    return report
