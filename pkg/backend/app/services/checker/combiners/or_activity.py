from typing import List, Sequence

from app.services.clock import VectorClock
from .base import IntervalCombiner


class OrCombiner(IntervalCombiner):
    kind = "OR"
    description = "Union of member intervals: earliest lo, latest hi"

    def select_lo(self, los: Sequence[VectorClock]) -> List[VectorClock]:
        return self.minimal(los)

    def select_hi(self, his: Sequence[VectorClock]) -> List[VectorClock]:
        return self.maximal(his)
