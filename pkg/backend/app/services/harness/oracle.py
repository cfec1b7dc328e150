"""
harness/oracle.py
=================
Physical-time oracle. Counts the cycles the user really completed and
matches every satisfaction reported by the checker to one of them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from app.exceptions import SafetyViolation
from app.services.checker import SatisfactionEvent
from .workload import GroundTruth, UserCycle

logger = logging.getLogger(__name__)


@dataclass
class OracleVerdict:
    num_phy: int
    num_oga: int
    # (satisfaction ordinal, cycle ordinal)
    matches: List[Tuple[int, int]] = field(default_factory=list)
    unmatched: List[int] = field(default_factory=list)
    # satisfactions whose consecutive occurrences are not ordered in simulated time
    misordered: List[int] = field(default_factory=list)

    @property
    def false_orderings(self) -> int:
        return len(self.unmatched) + len(self.misordered)

    @property
    def safe(self) -> bool:
        return self.false_orderings == 0 and self.num_oga <= self.num_phy

    def assert_safe(self):
        if not self.safe:
            raise SafetyViolation(
                f"{self.false_orderings} false orderings "
                f"(unmatched={self.unmatched}, misordered={self.misordered}), "
                f"num_oga={self.num_oga} num_phy={self.num_phy}"
            )


def _first_unclaimed(cycles: Sequence[UserCycle], claimed: List[bool], seen_at: float) -> Optional[int]:
    for i, cycle in enumerate(cycles):
        if cycle.last_entry > seen_at:
            return None
        if not claimed[i]:
            return i
    return None


def physical_oracle(truth: GroundTruth, satisfactions: Sequence[SatisfactionEvent]) -> OracleVerdict:
    """
    Greedy matching in time order: each satisfaction, taken by the time its
    last activity began, claims the earliest unclaimed complete cycle whose
    last zone was entered no later than that.
    """
    cycles = truth.complete_cycles
    verdict = OracleVerdict(num_phy=len(cycles), num_oga=len(satisfactions))

    for event in satisfactions:
        chain = event.occurrences
        for before, after in zip(chain, chain[1:]):
            if before.phys_hi > after.phys_lo:
                verdict.misordered.append(event.ordinal)
                break

    claimed = [False] * len(cycles)
    ordered = sorted(satisfactions, key=lambda e: (e.occurrences[-1].phys_lo, e.ordinal))
    for event in ordered:
        i = _first_unclaimed(cycles, claimed, event.occurrences[-1].phys_lo)
        if i is None:
            verdict.unmatched.append(event.ordinal)
            continue
        claimed[i] = True
        verdict.matches.append((event.ordinal, cycles[i].ordinal))

    if not verdict.safe:
        logger.error(
            f"Physical oracle: {verdict.false_orderings} false orderings, "
            f"num_oga={verdict.num_oga} num_phy={verdict.num_phy}"
        )
    return verdict
