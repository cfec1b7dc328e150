from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from app.exceptions import RoutingError
from app.services.activity import TimedInterval
from app.services.clock import VectorClock

# Address of the checker process; non-checker processes are 1..n.
CHECKER = 0


class MessageKind(str, Enum):
    CONTROL = "CTL"
    CHECKING = "CHK"


@dataclass(frozen=True, slots=True)
class Message:
    """
    Control message (``vc`` set) between non-checker processes, or checking
    message (``interval`` set) from a non-checker process to the checker.

    ``send_event`` is the sender's local event index, used to rebuild the
    send->receive edges of the execution graph.
    """

    kind: MessageKind
    sender: int
    receiver: int
    send_time: float
    vc: Optional[VectorClock] = None
    interval: Optional[TimedInterval] = None
    ga_id: int = 0
    seq: int = 0
    send_event: int = 0

    def __post_init__(self):
        if self.kind is MessageKind.CHECKING:
            if self.receiver != CHECKER:
                raise RoutingError(f"checking message from P{self.sender} addressed to P{self.receiver}")
            if self.interval is None:
                raise RoutingError(f"checking message from P{self.sender} carries no interval")
        else:
            if self.receiver == CHECKER:
                raise RoutingError(f"control message from P{self.sender} addressed to the checker")
            if self.vc is None:
                raise RoutingError(f"control message from P{self.sender} carries no clock")

    @classmethod
    def control(cls, sender: int, receiver: int, vc: VectorClock, now: float, send_event: int) -> Message:
        return cls(MessageKind.CONTROL, sender, receiver, now, vc=vc, send_event=send_event)

    @classmethod
    def checking(cls, interval: TimedInterval, ga_id: int, now: float, send_event: int) -> Message:
        return cls(
            MessageKind.CHECKING,
            interval.owner,
            CHECKER,
            now,
            interval=interval,
            ga_id=ga_id,
            seq=interval.seq,
            send_event=send_event,
        )
