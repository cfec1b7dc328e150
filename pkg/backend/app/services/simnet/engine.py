"""
simnet/engine.py
================
Deterministic discrete-event network: a simpy environment carrying
observed up/down transitions and message deliveries between the
non-checker processes and the checker.

Events run in (time, scheduling order); channels are not FIFO because every
message draws its own delay.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import simpy

from app.exceptions import DelayModelError, RoutingError
from app.services.agent import CHECKER, ContextAgent, Message, MessageKind
from app.services.checker import CheckerProcess
from app.services.clock import VectorClock
from .delay import ChannelStreams, DelayModel

logger = logging.getLogger(__name__)


class EventKind(str, Enum):
    UP = "UP"
    DOWN = "DOWN"
    DELIVERY = "DELIVER"


@dataclass(frozen=True, slots=True)
class SimEvent:
    time: float
    kind: EventKind
    pid: int
    message: Optional[Message] = None
    # (scheduling sequence number, process index), assigned by the engine
    tiebreak: Tuple[int, int] = (0, 0)

    @classmethod
    def transition(cls, time: float, pid: int, up: bool) -> SimEvent:
        return cls(time, EventKind.UP if up else EventKind.DOWN, pid)


@dataclass(frozen=True, slots=True)
class ExecutionRecord:
    """One handler invocation."""

    time: float
    tiebreak: Tuple[int, int]
    kind: EventKind
    pid: int
    event_index: int = 0
    vc: Optional[VectorClock] = None
    sent: Tuple[Message, ...] = ()
    received: Optional[Message] = None
    detections: int = 0
    satisfactions: int = 0

    def render(self) -> str:
        """Stable single-line text form, used for replay comparisons."""
        parts = [f"{self.time:.9f}", f"{self.tiebreak[0]}", self.kind.value, f"P{self.pid}"]
        if self.vc is not None:
            parts.append(str(self.vc))
        if self.received is not None:
            parts.append(f"from=P{self.received.sender}/{self.received.kind.value}")
        if self.sent:
            parts.append("sent=" + ",".join(f"{m.kind.value}>{m.receiver}" for m in self.sent))
        if self.detections or self.satisfactions:
            parts.append(f"det={self.detections} sat={self.satisfactions}")
        return " ".join(parts)


def schedule_send(msg: Message, now: float, model: DelayModel, rng: np.random.Generator) -> SimEvent:
    """Delivery event for ``msg`` sent at ``now``."""
    if not model.mean > 0:
        raise DelayModelError(f"mean delay must be positive, got {model.mean}")
    delay = model.sample(rng)
    return SimEvent(now + delay, EventKind.DELIVERY, msg.receiver, message=msg)


@dataclass
class NetworkStats:
    messages_sent: Dict[str, int] = field(default_factory=lambda: {"CTL": 0, "CHK": 0})
    messages_delivered: int = 0
    dropped_after_lifetime: int = 0
    crossings: int = 0


class SimNet:
    """
    Owns the virtual clock and routes deliveries to agents and checker.
    """

    def __init__(
            self,
            agents: Dict[int, ContextAgent],
            checker: CheckerProcess,
            delay_model: DelayModel,
            seed: int,
            lifetime: float,
    ):
        self.agents = agents
        self.checker = checker
        self.delay_model = delay_model
        self.streams = ChannelStreams(seed)
        self.lifetime = lifetime
        self.env = simpy.Environment()
        self.log: List[ExecutionRecord] = []
        self.deliveries: List[Tuple[float, Message]] = []
        self.stats = NetworkStats()
        self._seq = 0
        self._latest_delivered_send: Dict[Tuple[int, int], float] = {}

    @property
    def now(self) -> float:
        return self.env.now

    # ------------------------------------------------------------------
    # Scheduling
    # ------------------------------------------------------------------

    def schedule(self, event: SimEvent) -> Optional[SimEvent]:
        if event.time > self.lifetime:
            self.stats.dropped_after_lifetime += 1
            logger.warning(
                f"Dropping {event.kind.value} for P{event.pid} at t={event.time:.3f} "
                f"beyond lifetime {self.lifetime:.0f}s"
            )
            return None
        if event.time < self.env.now:
            raise RoutingError(f"cannot schedule {event.kind.value} in the past (t={event.time})")

        self._seq += 1
        stamped = SimEvent(event.time, event.kind, event.pid, event.message, (self._seq, event.pid))
        timeout = self.env.timeout(event.time - self.env.now)
        timeout.callbacks.append(lambda _ev, e=stamped: self._dispatch(e))
        return stamped

    def send(self, msg: Message):
        self.stats.messages_sent[msg.kind.value] += 1
        rng = self.streams.channel(msg.sender, msg.receiver)
        event = schedule_send(msg, self.env.now, self.delay_model, rng)
        self.schedule(event)

    # ------------------------------------------------------------------
    # Dispatch
    # ------------------------------------------------------------------

    def _dispatch(self, event: SimEvent):
        now = self.env.now
        if event.kind is EventKind.DELIVERY:
            self._deliver(event, now)
            return

        agent = self.agents[event.pid]
        sent = agent.on_up(now) if event.kind is EventKind.UP else agent.on_down(now)
        for msg in sent:
            self.send(msg)
        self.log.append(ExecutionRecord(
            time=now,
            tiebreak=event.tiebreak,
            kind=event.kind,
            pid=event.pid,
            event_index=agent.event_index,
            vc=agent.vc,
            sent=tuple(sent),
        ))

    def _deliver(self, event: SimEvent, now: float):
        msg = event.message
        self.stats.messages_delivered += 1
        self.deliveries.append((now, msg))

        channel = (msg.sender, msg.receiver)
        latest = self._latest_delivered_send.get(channel)
        if latest is not None and msg.send_time < latest:
            self.stats.crossings += 1
        else:
            self._latest_delivered_send[channel] = msg.send_time

        if msg.receiver == CHECKER:
            occurrences, satisfactions = self.checker.receive(msg, now)
            self.log.append(ExecutionRecord(
                time=now,
                tiebreak=event.tiebreak,
                kind=EventKind.DELIVERY,
                pid=CHECKER,
                received=msg,
                detections=len(occurrences),
                satisfactions=len(satisfactions),
            ))
            return

        if msg.kind is not MessageKind.CONTROL:
            raise RoutingError(f"P{msg.receiver} received a {msg.kind.value} message")
        agent = self.agents[msg.receiver]
        event_index = agent.on_control(msg)
        self.log.append(ExecutionRecord(
            time=now,
            tiebreak=event.tiebreak,
            kind=EventKind.DELIVERY,
            pid=msg.receiver,
            event_index=event_index,
            vc=agent.vc,
            received=msg,
        ))

    # ------------------------------------------------------------------
    # Run
    # ------------------------------------------------------------------

    def run_until_quiescent(self, events: Iterable[SimEvent]) -> List[ExecutionRecord]:
        for event in events:
            self.schedule(event)
        self.env.run()
        logger.debug(
            f"Simulation quiescent at t={self.env.now:.3f}: {len(self.log)} handler calls, "
            f"{self.stats.messages_delivered} deliveries, {self.stats.crossings} crossings"
        )
        return self.log
