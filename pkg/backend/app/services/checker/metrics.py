from dataclasses import dataclass

from app.services.clock import VectorClock


@dataclass
class ComparisonCounter:
    """Counts clock comparisons made by detection, pruning and ordering."""

    detection: int = 0
    pruning: int = 0
    ordering: int = 0

    def detection_hb(self, a: VectorClock, b: VectorClock) -> bool:
        self.detection += 1
        return a.happened_before(b)

    def pruning_hb(self, a: VectorClock, b: VectorClock) -> bool:
        self.pruning += 1
        return a.happened_before(b)

    def ordering_leq(self, a: VectorClock, b: VectorClock) -> bool:
        self.ordering += 1
        return a.leq(b)
