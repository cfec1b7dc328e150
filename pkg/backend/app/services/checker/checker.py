"""
checker/checker.py
==================
The checker process: routes checking messages to the per-activity
detectors and feeds every detected occurrence to the ordering cursor.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.exceptions import CheckerError, ConstraintError, RoutingError
from app.services.activity import ConstraintSpec, TimedInterval
from app.services.agent import Message, MessageKind
from .detection import GaDetector, GaOccurrence
from .metrics import ComparisonCounter
from .ordering import OrderingCursor, SatisfactionEvent

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class CheckerRecord:
    """Entry of the checker event log: a detection or a satisfaction."""

    time: float
    occurrence: Optional[GaOccurrence] = None
    satisfaction: Optional[SatisfactionEvent] = None

    @property
    def kind(self) -> str:
        return "DETECT" if self.occurrence is not None else "SATISFY"


@dataclass
class CheckerSummary:
    detections: Dict[int, int] = field(default_factory=dict)
    eliminated: Dict[int, int] = field(default_factory=dict)
    discarded: int = 0
    satisfied: int = 0
    comparisons: Dict[str, int] = field(default_factory=dict)


class CheckerProcess:
    def __init__(self, constraint: ConstraintSpec):
        self.constraint = constraint
        self.counter = ComparisonCounter()
        self.detectors: Dict[int, GaDetector] = {
            ga.ga_id: GaDetector(ga, self.counter) for ga in constraint
        }
        self.cursor = OrderingCursor(constraint, self.counter)
        self.log: List[CheckerRecord] = []

    @property
    def satisfied_count(self) -> int:
        return self.cursor.satisfied_count

    @property
    def occurrences(self) -> List[GaOccurrence]:
        return [r.occurrence for r in self.log if r.occurrence is not None]

    @property
    def satisfactions(self) -> List[SatisfactionEvent]:
        return [r.satisfaction for r in self.log if r.satisfaction is not None]

    def _detector_for(self, ga_id: int, owner: int) -> GaDetector:
        detector = self.detectors.get(ga_id)
        if detector is None:
            raise CheckerError(f"checking message for unknown activity GA_{ga_id}")
        try:
            self.constraint.activity(ga_id).member_index(owner)
        except ConstraintError as e:
            raise CheckerError(str(e)) from None
        return detector

    def ingest(self, ga_id: int, interval: TimedInterval) -> List[GaOccurrence]:
        """Queue one reported interval and return the occurrences it completes."""
        return self._detector_for(ga_id, interval.owner).ingest(interval)

    def advance_ordering(self, occurrences: List[GaOccurrence]) -> List[SatisfactionEvent]:
        for occurrence in occurrences:
            self.cursor.offer(occurrence)
        return self.cursor.advance()

    def receive(self, msg: Message, now: float = 0.0) -> Tuple[List[GaOccurrence], List[SatisfactionEvent]]:
        if msg.kind is not MessageKind.CHECKING:
            raise RoutingError(f"checker received a {msg.kind.value} message from P{msg.sender}")
        return self.process(msg.ga_id, msg.interval, now)

    def process(self, ga_id: int, interval: TimedInterval, now: float = 0.0):
        occurrences = self.ingest(ga_id, interval)
        return self._record(occurrences, now)

    def flush(self, now: float = 0.0):
        """Release intervals held back by sequence gaps (end of an offline replay)."""
        occurrences = []
        for detector in self.detectors.values():
            occurrences.extend(detector.flush())
        return self._record(occurrences, now)

    def _record(self, occurrences: List[GaOccurrence], now: float):
        satisfactions = self.advance_ordering(occurrences) if occurrences else []
        for occurrence in occurrences:
            self.log.append(CheckerRecord(time=now, occurrence=occurrence))
        for event in satisfactions:
            self.log.append(CheckerRecord(time=now, satisfaction=event))
        return occurrences, satisfactions

    def summary(self) -> CheckerSummary:
        return CheckerSummary(
            detections={k: d.detected for k, d in self.detectors.items()},
            eliminated={k: d.eliminated for k, d in self.detectors.items()},
            discarded=self.cursor.discarded,
            satisfied=self.cursor.satisfied_count,
            comparisons={
                "detection": self.counter.detection,
                "pruning": self.counter.pruning,
                "ordering": self.counter.ordering,
            },
        )
