"""
Sensor dissemination model.

A sensor buffers the changes of its local predicate and disseminates the
buffer at periodic ticks. The buffer keeps only the most recent changes of
a period, so short stays inside a long period are overwritten. The
receiving side replays a batch with its recorded spacing one period after
the true times, which keeps the relative timing of every reported change.
Sensors of one zone share a gateway and therefore a tick phase.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from app.exceptions import WorkloadError
from app.services.simnet import PHASE_STREAM, stream
from .workload import Transition

logger = logging.getLogger(__name__)

# changes a sensor can hold between two ticks
SENSOR_BUFFER = 2


@dataclass(frozen=True, slots=True)
class ObservedTransition:
    time: float
    true_time: float
    pid: int
    up: bool


@dataclass
class ObservedSchedule:
    transitions: List[ObservedTransition]
    # tick phase of every sensor group
    phases: Dict[int, float] = field(default_factory=dict)
    overwritten: int = 0


def next_tick(t: float, phase: float, period: float) -> float:
    if period == 0:
        return t
    tick = phase + math.ceil((t - phase) / period) * period
    return max(tick, t)


def period_index(t: float, phase: float, period: float) -> int:
    """Index k of the dissemination period (phase + (k-1)*period, phase + k*period] holding t."""
    return math.ceil((t - phase) / period)


def retained_changes(count: int, buffer_size: int = SENSOR_BUFFER) -> int:
    """
    How many of a period's ``count`` alternating changes survive in the buffer.

    The survivors are a suffix whose first change leaves the state the sensor
    had at the start of the period, so the reported state at every tick
    equals the true one.
    """
    if count <= buffer_size:
        return count
    return buffer_size if (count - buffer_size) % 2 == 0 else buffer_size - 1


def _sensor_phases(
        groups: Mapping[int, int],
        update_interval: float,
        seed: int,
        phase: Optional[float],
) -> Dict[int, float]:
    phases = {}
    for group in sorted(set(groups.values())):
        if update_interval == 0:
            phases[group] = 0.0
        elif phase is not None:
            phases[group] = phase % update_interval
        else:
            phases[group] = float(stream(seed, PHASE_STREAM, group).uniform(0.0, update_interval))
    return phases


def apply_update_interval(
        schedule: Iterable[Transition],
        update_interval: float,
        seed: int,
        pids: Sequence[int] = (),
        groups: Optional[Mapping[int, int]] = None,
        phase: Optional[float] = None,
        buffer_size: int = SENSOR_BUFFER,
) -> ObservedSchedule:
    """
    Filter every sensor's transitions through its dissemination buffer.

    ``groups`` maps a pid to the gateway it reports through; pids missing
    from it get a gateway of their own. Each gateway draws an independent
    uniform phase in [0, update_interval) unless ``phase`` pins them all.
    A change at true time t that survives the buffer is observed at
    t + update_interval, which is never before the tick disseminating it.
    Observed transitions are ordered by (observed time, true time, down
    before up, pid).
    """
    if update_interval < 0 or not math.isfinite(update_interval):
        raise WorkloadError(f"update interval must be >= 0, got {update_interval}")
    if buffer_size < 1:
        raise WorkloadError(f"sensor buffer must hold at least one change, got {buffer_size}")

    schedule = sorted(schedule, key=lambda t: (t.time, t.up, t.pid))
    all_pids = sorted(set(pids) | {t.pid for t in schedule})
    sensor_group = {pid: (groups or {}).get(pid, pid) for pid in all_pids}
    phases = _sensor_phases(sensor_group, update_interval, seed, phase)

    if update_interval == 0:
        observed = [ObservedTransition(t.time, t.time, t.pid, t.up) for t in schedule]
        return ObservedSchedule(transitions=observed, phases=phases)

    # (pid, period) -> changes of that sensor inside that period
    batches: Dict[tuple, List[Transition]] = defaultdict(list)
    for t in schedule:
        k = period_index(t.time, phases[sensor_group[t.pid]], update_interval)
        batches[(t.pid, k)].append(t)

    observed = []
    overwritten = 0
    for batch in batches.values():
        kept = retained_changes(len(batch), buffer_size)
        overwritten += len(batch) - kept
        observed.extend(
            ObservedTransition(t.time + update_interval, t.time, t.pid, t.up)
            for t in batch[len(batch) - kept:]
        )
    observed.sort(key=lambda o: (o.time, o.true_time, o.up, o.pid))

    if overwritten:
        logger.debug(f"{overwritten} sensor changes overwritten in the buffer (period {update_interval}s)")
    return ObservedSchedule(transitions=observed, phases=phases, overwritten=overwritten)
