from abc import ABC, abstractmethod
from typing import List, Optional, Sequence

from app.services.clock import VectorClock
from ..metrics import ComparisonCounter


class IntervalCombiner(ABC):
    """Abstract base for turning pairwise-overlapping heads into the interval of a global activity."""

    kind: str = "base"
    description: str = "Base combiner"

    def __init__(self, counter: Optional[ComparisonCounter] = None):
        self._counter = counter or ComparisonCounter()

    @abstractmethod
    def select_lo(self, los: Sequence[VectorClock]) -> List[VectorClock]:
        """Kept beginnings of the global activity."""

    @abstractmethod
    def select_hi(self, his: Sequence[VectorClock]) -> List[VectorClock]:
        """Kept endings of the global activity."""

    def maximal(self, clocks: Sequence[VectorClock]) -> List[VectorClock]:
        """Drop every clock that happens before some other clock."""
        return [
            c for c in clocks
            if not any(self._counter.pruning_hb(c, other) for other in clocks if other is not c)
        ]

    def minimal(self, clocks: Sequence[VectorClock]) -> List[VectorClock]:
        """Drop every clock that happens after some other clock."""
        return [
            c for c in clocks
            if not any(self._counter.pruning_hb(other, c) for other in clocks if other is not c)
        ]
