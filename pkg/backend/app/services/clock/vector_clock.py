"""
clock/vector_clock.py
=====================
Fixed-width vector clocks with the happen-before / concurrency predicates.

Process indices are 1-based (P_1..P_n) everywhere in the public API; the
tuple underneath is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Tuple

from app.exceptions import ClockError


@dataclass(frozen=True, slots=True)
class VectorClock:
    """Immutable vector clock, one slot per non-checker process."""

    entries: Tuple[int, ...]

    def __post_init__(self):
        if not self.entries:
            raise ClockError("vector clock needs at least one entry")
        if any(e < 0 for e in self.entries):
            raise ClockError(f"vector clock entries must be non-negative: {list(self.entries)}")

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> VectorClock:
        if n < 1:
            raise ClockError(f"process count must be >= 1, got {n}")
        return cls((0,) * n)

    @classmethod
    def of(cls, values: Iterable[int]) -> VectorClock:
        return cls(tuple(int(v) for v in values))

    @property
    def width(self) -> int:
        return len(self.entries)

    def __getitem__(self, pid: int) -> int:
        """Entry of process ``pid`` (1-based)."""
        self._check_pid(pid)
        return self.entries[pid - 1]

    def _check_pid(self, pid: int):
        if not 1 <= pid <= len(self.entries):
            raise ClockError(f"process index {pid} out of range 1..{len(self.entries)}")

    def _check_width(self, other: VectorClock):
        if len(self.entries) != len(other.entries):
            raise ClockError(
                f"clock width mismatch: {len(self.entries)} vs {len(other.entries)}"
            )

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def increment(self, pid: int) -> VectorClock:
        self._check_pid(pid)
        values = list(self.entries)
        values[pid - 1] += 1
        return VectorClock(tuple(values))

    def merge(self, other: VectorClock) -> VectorClock:
        """Componentwise maximum (least upper bound)."""
        self._check_width(other)
        return VectorClock(tuple(max(a, b) for a, b in zip(self.entries, other.entries)))

    # ------------------------------------------------------------------
    # Order predicates
    # ------------------------------------------------------------------

    def leq(self, other: VectorClock) -> bool:
        self._check_width(other)
        return all(a <= b for a, b in zip(self.entries, other.entries))

    def happened_before(self, other: VectorClock) -> bool:
        return self.leq(other) and self.entries != other.entries

    def concurrent(self, other: VectorClock) -> bool:
        self._check_width(other)
        if self.entries == other.entries:
            return False
        return not self.leq(other) and not other.leq(self)

    # ------------------------------------------------------------------
    # Encoding
    # ------------------------------------------------------------------

    def to_list(self) -> List[int]:
        return list(self.entries)

    def __str__(self) -> str:
        return "[" + ",".join(str(e) for e in self.entries) + "]"

    __repr__ = __str__


# ============================================================================
# Functional API
# ============================================================================

def vc_new(n: int) -> VectorClock:
    return VectorClock.zero(n)


def vc_increment(vc: VectorClock, pid: int) -> VectorClock:
    return vc.increment(pid)


def vc_merge(a: VectorClock, b: VectorClock) -> VectorClock:
    return a.merge(b)


def happened_before(a: VectorClock, b: VectorClock) -> bool:
    """Strict causal precedence ``a -> b``."""
    return a.happened_before(b)


def leq(a: VectorClock, b: VectorClock) -> bool:
    return a.leq(b)


def concurrent(a: VectorClock, b: VectorClock) -> bool:
    return a.concurrent(b)


def antichain(clocks: Iterable[VectorClock]) -> bool:
    """True if every pair of distinct clocks in ``clocks`` is concurrent."""
    items = list(clocks)
    return all(
        items[i].concurrent(items[j])
        for i in range(len(items))
        for j in range(i + 1, len(items))
    )
