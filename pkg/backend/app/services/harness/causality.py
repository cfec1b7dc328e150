"""
harness/causality.py
====================
Brute-force reference for detection and ordering. Happen-before is taken
from the transitive closure of the execution graph (process order plus
control send -> receive edges) instead of vector clocks.
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.services.activity import ActivityKind, ConstraintSpec, GlobalActivitySpec
from app.services.agent import CHECKER, MessageKind
from app.services.simnet import EventKind, ExecutionRecord

logger = logging.getLogger(__name__)

EventId = Tuple[int, int]  # (pid, local event index)
IntervalKey = Tuple[int, int]  # (owner, seq)


@dataclass(frozen=True, slots=True)
class ReportedInterval:
    owner: int
    seq: int
    lo: EventId
    hi: EventId

    @property
    def key(self) -> IntervalKey:
        return self.owner, self.seq


@dataclass(frozen=True, slots=True)
class ReferenceOccurrence:
    ga_id: int
    keys: Tuple[IntervalKey, ...]
    kept_lo: frozenset
    kept_hi: frozenset


class EventGraph:
    """Reachability over the events of the non-checker processes."""

    def __init__(self, log: Sequence[ExecutionRecord]):
        self.records: Dict[EventId, ExecutionRecord] = {}
        edges: List[Tuple[EventId, EventId]] = []
        by_pid: Dict[int, List[int]] = defaultdict(list)

        for record in log:
            if record.pid == CHECKER:
                continue
            event = (record.pid, record.event_index)
            self.records[event] = record
            by_pid[record.pid].append(record.event_index)
            msg = record.received
            if msg is not None and msg.kind is MessageKind.CONTROL:
                edges.append(((msg.sender, msg.send_event), event))

        for pid, indices in by_pid.items():
            indices.sort()
            edges.extend(((pid, a), (pid, b)) for a, b in zip(indices, indices[1:]))

        self.index = {event: i for i, event in enumerate(sorted(self.records))}
        size = len(self.index)
        reach = np.zeros((size, size), dtype=bool)
        for a, b in edges:
            reach[self.index[a], self.index[b]] = True
        # Warshall
        for k in range(size):
            reach |= np.outer(reach[:, k], reach[k, :])
        self.reach = reach

    def happened_before(self, a: EventId, b: EventId) -> bool:
        return bool(self.reach[self.index[a], self.index[b]])

    def leq(self, a: EventId, b: EventId) -> bool:
        return a == b or self.happened_before(a, b)

    def clock_mismatches(self) -> List[Tuple[EventId, EventId]]:
        """Pairs of up/down events on which vector-clock order and graph reachability disagree."""
        ticks = [e for e, r in self.records.items() if r.kind is not EventKind.DELIVERY]
        wrong = []
        for a, b in itertools.permutations(ticks, 2):
            by_clock = self.records[a].vc.happened_before(self.records[b].vc)
            if by_clock != self.happened_before(a, b):
                wrong.append((a, b))
        return wrong


def reported_intervals(log: Sequence[ExecutionRecord]) -> Dict[int, List[ReportedInterval]]:
    """Intervals that produced a checking message, per owner in seq order."""
    last_up: Dict[int, EventId] = {}
    reported: Dict[int, List[ReportedInterval]] = defaultdict(list)
    for record in log:
        if record.kind is EventKind.UP:
            last_up[record.pid] = (record.pid, record.event_index)
        elif record.kind is EventKind.DOWN:
            for msg in record.sent:
                if msg.kind is MessageKind.CHECKING:
                    reported[record.pid].append(ReportedInterval(
                        owner=record.pid,
                        seq=msg.seq,
                        lo=last_up[record.pid],
                        hi=(record.pid, record.event_index),
                    ))
    for intervals in reported.values():
        intervals.sort(key=lambda iv: iv.seq)
    return reported


def _overlap(graph: EventGraph, a: ReportedInterval, b: ReportedInterval) -> bool:
    return graph.happened_before(a.lo, b.hi) and graph.happened_before(b.lo, a.hi)


def _extremes(graph: EventGraph, events: List[EventId], maximal: bool) -> frozenset:
    if maximal:
        return frozenset(e for e in events if not any(graph.happened_before(e, f) for f in events))
    return frozenset(e for e in events if not any(graph.happened_before(f, e) for f in events))


def reference_detections(
        graph: EventGraph,
        ga: GlobalActivitySpec,
        reported: Dict[int, List[ReportedInterval]],
) -> List[ReferenceOccurrence]:
    """
    Repeatedly take the smallest combination (one interval per member, at
    or after the current start) whose intervals pairwise overlap. Such
    combinations are closed under componentwise minimum, so the first one in
    lexicographic order is the least.
    """
    lists = [reported.get(pid, []) for pid in ga.members]
    start = [0] * len(lists)
    found: List[ReferenceOccurrence] = []

    while True:
        best: Optional[Tuple[int, ...]] = None
        ranges = [range(s, len(lst)) for s, lst in zip(start, lists)]
        for combo in itertools.product(*ranges):
            heads = [lists[t][i] for t, i in enumerate(combo)]
            if all(_overlap(graph, a, b) for a, b in itertools.combinations(heads, 2)):
                best = combo
                break
        if best is None:
            return found

        heads = [lists[t][i] for t, i in enumerate(best)]
        los = [iv.lo for iv in heads]
        his = [iv.hi for iv in heads]
        if ga.kind is ActivityKind.AND:
            kept_lo, kept_hi = _extremes(graph, los, True), _extremes(graph, his, False)
        else:
            kept_lo, kept_hi = _extremes(graph, los, False), _extremes(graph, his, True)
        found.append(ReferenceOccurrence(ga.ga_id, tuple(iv.key for iv in heads), kept_lo, kept_hi))
        start = [i + 1 for i in best]


def reference_orderings(
        graph: EventGraph,
        constraint: ConstraintSpec,
        detections: Dict[int, List[ReferenceOccurrence]],
) -> List[Tuple[Tuple[int, int], ...]]:
    """
    Constraint walk over the per-activity detection sequences.

    Returns each satisfaction as a chain of (ga_id, 1-based detection ordinal).
    """
    position = {ga.ga_id: 0 for ga in constraint}
    satisfactions = []
    chain: List[Tuple[int, int]] = []
    pre: Optional[ReferenceOccurrence] = None
    index = 1

    while position[index] < len(detections.get(index, [])):
        cur = detections[index][position[index]]
        position[index] += 1
        if pre is not None and not all(graph.leq(h, l) for h in pre.kept_hi for l in cur.kept_lo):
            continue
        chain.append((index, position[index]))
        pre = cur
        index += 1
        if index > constraint.m:
            satisfactions.append(tuple(chain))
            chain, pre, index = [], None, 1
    return satisfactions
