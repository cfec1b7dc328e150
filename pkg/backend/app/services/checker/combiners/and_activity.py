from typing import List, Sequence

from app.services.clock import VectorClock
from .base import IntervalCombiner


class AndCombiner(IntervalCombiner):
    kind = "AND"
    description = "Intersection of member intervals: latest lo, earliest hi"

    def select_lo(self, los: Sequence[VectorClock]) -> List[VectorClock]:
        return self.maximal(los)

    def select_hi(self, his: Sequence[VectorClock]) -> List[VectorClock]:
        return self.minimal(his)
