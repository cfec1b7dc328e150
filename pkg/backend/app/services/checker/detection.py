"""
checker/detection.py
====================
Detection of one global activity from the checking messages of its
members: per-member interval queues, head elimination until the heads are
pairwise overlapping, and the pruned lo/hi sets of the detected activity.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, Iterable, List, Optional, Sequence, Tuple

from app.exceptions import CheckerError
from app.services.activity import ActivityKind, GlobalActivitySpec, TimedInterval
from app.services.clock import VectorClock
from .combiners import COMBINER_CLASSES
from .metrics import ComparisonCounter

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class GaOccurrence:
    """A detected global activity: the kept (pairwise concurrent) lo and hi clocks."""

    ga_id: int
    kind: ActivityKind
    que_lo: Tuple[VectorClock, ...]
    que_hi: Tuple[VectorClock, ...]
    intervals: Tuple[TimedInterval, ...]
    ordinal: int = 0

    @property
    def keys(self) -> Tuple[Tuple[int, int], ...]:
        """(owner, seq) of every contributing interval."""
        return tuple(iv.key for iv in self.intervals)

    def lo_intervals(self) -> List[TimedInterval]:
        return [iv for iv in self.intervals if iv.lo in self.que_lo]

    def hi_intervals(self) -> List[TimedInterval]:
        return [iv for iv in self.intervals if iv.hi in self.que_hi]

    @property
    def phys_lo(self) -> float:
        """Latest physical time among the kept beginnings."""
        return max(iv.phys_lo for iv in self.lo_intervals())

    @property
    def phys_hi(self) -> float:
        """Earliest physical time among the kept endings."""
        return min(iv.phys_hi for iv in self.hi_intervals())


def compute_interval(
        heads: Sequence[TimedInterval],
        kind: ActivityKind,
        ga_id: int = 0,
        ordinal: int = 0,
        counter: Optional[ComparisonCounter] = None,
) -> GaOccurrence:
    """Prune the heads' los and his down to the antichains bounding the occurrence."""
    if not heads:
        raise CheckerError("cannot compute the interval of an empty set of heads")
    combiner = COMBINER_CLASSES[ActivityKind(kind)](counter)
    que_lo = combiner.select_lo([iv.lo for iv in heads])
    que_hi = combiner.select_hi([iv.hi for iv in heads])
    return GaOccurrence(
        ga_id=ga_id,
        kind=ActivityKind(kind),
        que_lo=tuple(que_lo),
        que_hi=tuple(que_hi),
        intervals=tuple(heads),
        ordinal=ordinal,
    )


class GaDetector:
    """Que_(k,t) for every member t of one global activity, plus FIFO reconstruction."""

    def __init__(self, ga: GlobalActivitySpec, counter: Optional[ComparisonCounter] = None):
        self.ga = ga
        self.counter = counter or ComparisonCounter()
        self.queues: Dict[int, Deque[TimedInterval]] = {pid: deque() for pid in ga.members}
        self._expected_seq: Dict[int, int] = {pid: 1 for pid in ga.members}
        self._reorder: Dict[int, Dict[int, TimedInterval]] = {pid: {} for pid in ga.members}
        self.detected = 0
        self.eliminated = 0

    # ------------------------------------------------------------------
    # FIFO reconstruction
    # ------------------------------------------------------------------

    def _release(self, interval: TimedInterval) -> List[TimedInterval]:
        pid, seq = interval.owner, interval.seq
        if pid not in self.queues:
            raise CheckerError(f"P{pid} is not a member of GA_{self.ga.ga_id}")
        if seq < self._expected_seq[pid] or seq in self._reorder[pid]:
            raise CheckerError(f"duplicate checking message seq={seq} from P{pid}")

        self._reorder[pid][seq] = interval
        released = []
        while self._expected_seq[pid] in self._reorder[pid]:
            released.append(self._reorder[pid].pop(self._expected_seq[pid]))
            self._expected_seq[pid] += 1
        if not released:
            logger.debug(f"GA_{self.ga.ga_id}: buffered P{pid} seq={seq}, waiting for seq={self._expected_seq[pid]}")
        return released

    @property
    def pending(self) -> Dict[int, List[int]]:
        """Sequence numbers still held back waiting for a gap to fill."""
        return {pid: sorted(buf) for pid, buf in self._reorder.items() if buf}

    def flush(self) -> List[GaOccurrence]:
        """Give up on missing sequence numbers and release everything buffered."""
        occurrences = []
        for pid, buffer in self._reorder.items():
            for seq in sorted(buffer):
                logger.warning(
                    f"GA_{self.ga.ga_id}: seq gap on P{pid}, releasing seq={seq} "
                    f"(expected {self._expected_seq[pid]})"
                )
                self._expected_seq[pid] = seq + 1
                occurrences.extend(self._enqueue(buffer[seq]))
            buffer.clear()
        return occurrences

    # ------------------------------------------------------------------
    # Detection
    # ------------------------------------------------------------------

    def ingest(self, interval: TimedInterval) -> List[GaOccurrence]:
        occurrences = []
        for released in self._release(interval):
            occurrences.extend(self._enqueue(released))
        return occurrences

    def _enqueue(self, interval: TimedInterval) -> List[GaOccurrence]:
        queue = self.queues[interval.owner]
        queue.append(interval)
        if queue[0] is not interval:
            return []
        return self._check({interval.owner})

    def _check(self, changed: Iterable[int]) -> List[GaOccurrence]:
        occurrences = []
        changed = set(changed)
        while True:
            self._eliminate(changed)
            if not all(self.queues.values()):
                return occurrences

            heads = [self.queues[pid].popleft() for pid in self.ga.members]
            self.detected += 1
            occurrence = compute_interval(
                heads, self.ga.kind, ga_id=self.ga.ga_id, ordinal=self.detected, counter=self.counter
            )
            logger.debug(
                f"GA_{self.ga.ga_id} #{self.detected} detected from {list(occurrence.keys)}: "
                f"lo={list(occurrence.que_lo)} hi={list(occurrence.que_hi)}"
            )
            occurrences.append(occurrence)
            changed = {pid for pid in self.ga.members if self.queues[pid]}
            if not changed:
                return occurrences

    def _eliminate(self, changed: set):
        hb = self.counter.detection_hb
        while changed:
            new_changed = set()
            for i in sorted(changed):
                head_i = self.queues[i][0]
                for j in self.ga.members:
                    if j == i or not self.queues[j]:
                        continue
                    head_j = self.queues[j][0]
                    if not hb(head_j.lo, head_i.hi):
                        new_changed.add(i)
                    if not hb(head_i.lo, head_j.hi):
                        new_changed.add(j)
            for pid in new_changed:
                dropped = self.queues[pid].popleft()
                self.eliminated += 1
                logger.debug(f"GA_{self.ga.ga_id}: eliminated P{pid} seq={dropped.seq}")
            changed = {pid for pid in new_changed if self.queues[pid]}
