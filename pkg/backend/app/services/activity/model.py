"""
Domain vocabulary: local activity intervals, AND/OR global activities and
the ordered constraint GA_1 < GA_2 < ... < GA_m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, Tuple

from app.exceptions import ClockError, ConstraintError
from app.services.clock import VectorClock


class ActivityKind(str, Enum):
    AND = "AND"
    OR = "OR"

    def dual(self) -> ActivityKind:
        return ActivityKind.OR if self is ActivityKind.AND else ActivityKind.AND


@dataclass(frozen=True, slots=True)
class TimedInterval:
    """
    One true-period of a local predicate on process ``owner``.

    ``phys_lo``/``phys_hi`` are the simulated times at which the owner
    processed the transitions. Detection never reads them; they only feed
    the physical-time oracle.
    """

    owner: int
    lo: VectorClock
    hi: VectorClock
    seq: int
    phys_lo: float = 0.0
    phys_hi: float = 0.0

    def __post_init__(self):
        if not self.lo.happened_before(self.hi):
            raise ClockError(f"interval of P{self.owner} has lo {self.lo} not before hi {self.hi}")
        if self.phys_hi < self.phys_lo:
            raise ClockError(
                f"interval of P{self.owner} ends ({self.phys_hi}) before it starts ({self.phys_lo})"
            )

    @property
    def key(self) -> Tuple[int, int]:
        return self.owner, self.seq


def intervals_overlap(a: TimedInterval, b: TimedInterval) -> bool:
    """(a.lo -> b.hi) and (b.lo -> a.hi)"""
    return a.lo.happened_before(b.hi) and b.lo.happened_before(a.hi)


@dataclass(frozen=True, slots=True)
class GlobalActivitySpec:
    ga_id: int
    kind: ActivityKind
    members: Tuple[int, ...]

    def __post_init__(self):
        if not self.members:
            raise ConstraintError(f"GA_{self.ga_id} has no members")
        if len(set(self.members)) != len(self.members):
            raise ConstraintError(f"GA_{self.ga_id} lists a process twice: {list(self.members)}")

    @property
    def size(self) -> int:
        return len(self.members)

    def member_index(self, pid: int) -> int:
        """Position t of ``pid`` inside this activity (1-based)."""
        try:
            return self.members.index(pid) + 1
        except ValueError:
            raise ConstraintError(f"P{pid} is not a member of GA_{self.ga_id}") from None

    def render(self) -> str:
        return f"{self.kind.value}({','.join(str(p) for p in self.members)})"


@dataclass(frozen=True, slots=True)
class ConstraintSpec:
    activities: Tuple[GlobalActivitySpec, ...]
    _owner: Dict[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not self.activities:
            raise ConstraintError("constraint needs at least one global activity")
        owner: Dict[int, int] = {}
        for position, ga in enumerate(self.activities, start=1):
            if ga.ga_id != position:
                raise ConstraintError(f"activity ids must be 1..m in order, got {ga.ga_id} at {position}")
            for pid in ga.members:
                if pid in owner:
                    raise ConstraintError(
                        f"P{pid} belongs to both GA_{owner[pid]} and GA_{ga.ga_id}"
                    )
                owner[pid] = ga.ga_id
        n = len(owner)
        out_of_range = sorted(pid for pid in owner if not 1 <= pid <= n)
        if out_of_range:
            raise ConstraintError(
                f"process indices {out_of_range} out of range 1..{n}; members must cover 1..n"
            )
        object.__setattr__(self, "_owner", owner)

    @property
    def m(self) -> int:
        return len(self.activities)

    @property
    def n(self) -> int:
        return len(self._owner)

    def __iter__(self) -> Iterator[GlobalActivitySpec]:
        return iter(self.activities)

    def activity(self, ga_id: int) -> GlobalActivitySpec:
        if not 1 <= ga_id <= len(self.activities):
            raise ConstraintError(f"unknown activity GA_{ga_id}")
        return self.activities[ga_id - 1]

    def activity_of(self, pid: int) -> GlobalActivitySpec:
        try:
            return self.activities[self._owner[pid] - 1]
        except KeyError:
            raise ConstraintError(f"P{pid} is not part of the constraint") from None

    def render(self) -> str:
        return " < ".join(ga.render() for ga in self.activities)

    def __str__(self) -> str:
        return self.render()
