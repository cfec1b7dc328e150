"""
agent/agent.py
==============
Non-checker process: turns local predicate transitions into control
and checking messages and keeps the process vector clock.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

from app.exceptions import ProtocolError, RoutingError
from app.services.activity import GlobalActivitySpec, TimedInterval
from app.services.clock import VectorClock
from .messages import Message, MessageKind

logger = logging.getLogger(__name__)


@dataclass
class AgentStats:
    controls_sent: int = 0
    controls_received: int = 0
    checking_sent: int = 0
    suppressed_intervals: int = 0


class ContextAgent:
    """
    Message activities of one non-checker process.

    The clock entry of this process is incremented before each up and each
    down; receiving a control message only merges.
    """

    def __init__(self, pid: int, ga: GlobalActivitySpec, n: int):
        if pid not in ga.members:
            raise ProtocolError(f"P{pid} is not a member of GA_{ga.ga_id}")
        self.pid = pid
        self.ga = ga
        self.n = n
        self.vc = VectorClock.zero(n)
        self.cur_lo: Optional[VectorClock] = None
        self.flag_msg_act = True
        self.next_seq = 1
        self.phys_lo_pending = 0.0
        self.active = False
        # Index of the last local event (up, down or control receive).
        self.event_index = 0
        self.stats = AgentStats()

    def _next_event(self) -> int:
        self.event_index += 1
        return self.event_index

    def on_up(self, now: float) -> List[Message]:
        if self.active:
            raise ProtocolError(f"P{self.pid}: up while the local activity is already true")
        self.active = True
        self.vc = self.vc.increment(self.pid)
        event = self._next_event()

        messages = [
            Message.control(self.pid, peer, self.vc, now, event)
            for peer in self.ga.members
            if peer != self.pid
        ]
        self.stats.controls_sent += len(messages)

        if self.flag_msg_act:
            self.cur_lo = self.vc
            self.phys_lo_pending = now
        else:
            self.cur_lo = None
        return messages

    def on_down(self, now: float) -> List[Message]:
        if not self.active:
            raise ProtocolError(f"P{self.pid}: down without a preceding up")
        self.active = False
        self.vc = self.vc.increment(self.pid)
        event = self._next_event()

        messages = [
            Message.control(self.pid, peer, self.vc, now, event)
            for peer in range(1, self.n + 1)
            if peer != self.pid
        ]
        self.stats.controls_sent += len(messages)

        # An interval whose up was not recorded stays suppressed even if a
        # control message arrived in between.
        if self.flag_msg_act and self.cur_lo is not None:
            interval = TimedInterval(
                owner=self.pid,
                lo=self.cur_lo,
                hi=self.vc,
                seq=self.next_seq,
                phys_lo=self.phys_lo_pending,
                phys_hi=now,
            )
            messages.append(Message.checking(interval, self.ga.ga_id, now, event))
            self.stats.checking_sent += 1
            self.next_seq += 1
            self.flag_msg_act = False
        else:
            self.stats.suppressed_intervals += 1
            logger.debug(f"P{self.pid}: interval ending at {now:.3f} suppressed")
        self.cur_lo = None
        return messages

    def on_control(self, msg: Message) -> int:
        """Merge a control message; returns the local index of the receive event."""
        if msg.kind is not MessageKind.CONTROL:
            raise RoutingError(f"P{self.pid} received a {msg.kind.value} message from P{msg.sender}")
        self.vc = self.vc.merge(msg.vc)
        self.flag_msg_act = True
        self.stats.controls_received += 1
        return self._next_event()
