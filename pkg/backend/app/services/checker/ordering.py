"""
checker/ordering.py
===================
Ordering of detected global activities: an activity precedes the next one
in the constraint when every kept hi of its accepted occurrence is <= every
kept lo of the next occurrence.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, List, Optional, Tuple

from app.services.activity import ConstraintSpec
from app.services.clock import VectorClock
from .detection import GaOccurrence
from .metrics import ComparisonCounter

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class SatisfactionEvent:
    """One complete GA_1 < ... < GA_m sequence."""

    ordinal: int
    occurrences: Tuple[GaOccurrence, ...]

    @property
    def occurrence_ordinals(self) -> Tuple[int, ...]:
        return tuple(o.ordinal for o in self.occurrences)


class OrderingCursor:
    """
    Walks the constraint one activity at a time.

    An occurrence that fails the comparison against the previously accepted
    activity is discarded and the next occurrence of the same activity is
    tried; the previously accepted one is kept.
    """

    def __init__(self, constraint: ConstraintSpec, counter: Optional[ComparisonCounter] = None):
        self.constraint = constraint
        self.counter = counter or ComparisonCounter()
        self.available: Dict[int, Deque[GaOccurrence]] = {ga.ga_id: deque() for ga in constraint}
        self.index = 1
        self.pre: Optional[GaOccurrence] = None
        self.cur: Optional[GaOccurrence] = None
        self._chain: List[GaOccurrence] = []
        self.satisfied_count = 0
        self.discarded = 0

    @property
    def pre_que_hi(self) -> Tuple[VectorClock, ...]:
        return self.pre.que_hi if self.pre else ()

    def offer(self, occurrence: GaOccurrence):
        self.available[occurrence.ga_id].append(occurrence)

    def _ordered_after_pre(self, occurrence: GaOccurrence) -> bool:
        leq = self.counter.ordering_leq
        return all(leq(vc_pre, vc_cur) for vc_pre in self.pre_que_hi for vc_cur in occurrence.que_lo)

    def advance(self) -> List[SatisfactionEvent]:
        events = []
        queue = self.available[self.index]
        while queue:
            self.cur = queue.popleft()
            if not self._ordered_after_pre(self.cur):
                self.discarded += 1
                logger.debug(
                    f"GA_{self.index} #{self.cur.ordinal} not ordered after "
                    f"GA_{self.index - 1} #{self.pre.ordinal}, discarded"
                )
                continue

            self._chain.append(self.cur)
            self.pre = self.cur
            self.index += 1
            if self.index > self.constraint.m:
                self.satisfied_count += 1
                event = SatisfactionEvent(ordinal=self.satisfied_count, occurrences=tuple(self._chain))
                logger.debug(f"Constraint satisfied #{event.ordinal} by occurrences {event.occurrence_ordinals}")
                events.append(event)
                self.index = 1
                self.pre = None
                self._chain = []
            queue = self.available[self.index]
        return events
