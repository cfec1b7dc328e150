"""
reporting/trace.py
==================
Line-oriented trace of delivered messages and its offline replay through
the checker.

One record per line, whitespace separated:

    kind time from to seq ga_id vc_lo vc_hi [phys_lo phys_hi]

``kind`` is CTL or CHK and ``time`` the delivery time. Clocks are bracketed
integer lists without spaces. A control record carries its clock in
``vc_lo``, ``-`` in ``vc_hi`` and the sender's event index in ``seq``.
Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from app.exceptions import ClockError, ConsistencyCheckError, TraceFormatError
from app.services.activity import ConstraintSpec, TimedInterval
from app.services.agent import CHECKER, Message, MessageKind
from app.services.checker import CheckerProcess, GaOccurrence, SatisfactionEvent
from app.services.clock import VectorClock

logger = logging.getLogger(__name__)

_CLOCK = re.compile(r"^\[(\d+(?:,\d+)*)\]$")
NO_CLOCK = "-"


@dataclass(frozen=True, slots=True)
class TraceRecord:
    kind: MessageKind
    time: float
    sender: int
    receiver: int
    seq: int
    ga_id: int
    vc_lo: VectorClock
    vc_hi: Optional[VectorClock] = None
    phys_lo: float = 0.0
    phys_hi: float = 0.0
    line_number: int = 0

    def interval(self) -> TimedInterval:
        return TimedInterval(
            owner=self.sender,
            lo=self.vc_lo,
            hi=self.vc_hi,
            seq=self.seq,
            phys_lo=self.phys_lo,
            phys_hi=self.phys_hi,
        )


def _clock(vc: VectorClock) -> str:
    return "[" + ",".join(str(v) for v in vc.entries) + "]"


def format_delivery(time: float, msg: Message) -> str:
    if msg.kind is MessageKind.CONTROL:
        fields = [msg.kind.value, repr(time), str(msg.sender), str(msg.receiver),
                  str(msg.send_event), "0", _clock(msg.vc), NO_CLOCK]
    else:
        iv = msg.interval
        fields = [msg.kind.value, repr(time), str(msg.sender), str(msg.receiver),
                  str(msg.seq), str(msg.ga_id), _clock(iv.lo), _clock(iv.hi),
                  repr(iv.phys_lo), repr(iv.phys_hi)]
    return " ".join(fields)


def write_trace(path: Union[str, Path], deliveries: Iterable[Tuple[float, Message]]) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [format_delivery(t, msg) for t, msg in deliveries]
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    logger.info(f"Wrote {len(lines)} trace records to {path}")
    return len(lines)


def _parse_clock(text: str, line_number: int) -> VectorClock:
    match = _CLOCK.match(text)
    if not match:
        raise TraceFormatError(f"malformed vector clock {text!r}", line_number)
    return VectorClock.of(int(v) for v in match.group(1).split(","))


def _parse_int(text: str, name: str, line_number: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise TraceFormatError(f"{name} must be an integer, got {text!r}", line_number) from None
    if value < 0:
        raise TraceFormatError(f"{name} must be non-negative, got {value}", line_number)
    return value


def _parse_float(text: str, name: str, line_number: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise TraceFormatError(f"{name} must be a number, got {text!r}", line_number) from None


def parse_line(line: str, line_number: int) -> Optional[TraceRecord]:
    text = line.strip()
    if not text or text.startswith("#"):
        return None

    fields = text.split()
    if len(fields) not in (8, 10):
        raise TraceFormatError(f"expected 8 or 10 fields, got {len(fields)}", line_number)

    try:
        kind = MessageKind(fields[0].upper())
    except ValueError:
        raise TraceFormatError(f"unknown record kind {fields[0]!r}", line_number) from None

    time = _parse_float(fields[1], "time", line_number)
    sender = _parse_int(fields[2], "from", line_number)
    receiver = _parse_int(fields[3], "to", line_number)
    seq = _parse_int(fields[4], "seq", line_number)
    ga_id = _parse_int(fields[5], "ga_id", line_number)
    vc_lo = _parse_clock(fields[6], line_number)
    phys_lo = phys_hi = 0.0
    if len(fields) == 10:
        phys_lo = _parse_float(fields[8], "phys_lo", line_number)
        phys_hi = _parse_float(fields[9], "phys_hi", line_number)

    if kind is MessageKind.CONTROL:
        if fields[7] != NO_CLOCK:
            raise TraceFormatError(f"control record must have '{NO_CLOCK}' as vc_hi", line_number)
        if receiver == CHECKER:
            raise TraceFormatError("control record addressed to the checker", line_number)
        return TraceRecord(kind, time, sender, receiver, seq, ga_id, vc_lo, None, line_number=line_number)

    vc_hi = _parse_clock(fields[7], line_number)
    if receiver != CHECKER:
        raise TraceFormatError(f"checking record addressed to P{receiver}", line_number)
    if seq < 1:
        raise TraceFormatError("checking record seq must start at 1", line_number)
    record = TraceRecord(kind, time, sender, receiver, seq, ga_id, vc_lo, vc_hi, phys_lo, phys_hi, line_number)
    try:
        record.interval()
    except ClockError as e:
        raise TraceFormatError(str(e), line_number) from None
    return record


def read_trace(path: Union[str, Path]) -> List[TraceRecord]:
    records = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            record = parse_line(line, line_number)
            if record is not None:
                records.append(record)
    return records


@dataclass
class TraceReport:
    constraint: ConstraintSpec
    occurrences: List[GaOccurrence]
    satisfactions: List[SatisfactionEvent]
    checking_records: int = 0
    control_records: int = 0

    def render(self) -> List[str]:
        """Report lines; independent of the order in which records were read."""
        lines = [f"constraint: {self.constraint.render()}"]
        for ga in self.constraint:
            found = sorted((o for o in self.occurrences if o.ga_id == ga.ga_id), key=lambda o: o.ordinal)
            lines.append(f"GA_{ga.ga_id} {ga.render()}: {len(found)} detections")
            for o in found:
                members = ",".join(f"P{owner}:{seq}" for owner, seq in o.keys)
                lo = " ".join(_clock(vc) for vc in o.que_lo)
                hi = " ".join(_clock(vc) for vc in o.que_hi)
                lines.append(f"  #{o.ordinal} intervals={members} lo={lo} hi={hi}")
        lines.append(f"satisfactions: {len(self.satisfactions)}")
        for event in sorted(self.satisfactions, key=lambda e: e.ordinal):
            chain = " < ".join(f"GA_{o.ga_id}#{o.ordinal}" for o in event.occurrences)
            lines.append(f"  #{event.ordinal} {chain}")
        return lines


def replay(records: Sequence[TraceRecord], constraint: ConstraintSpec) -> TraceReport:
    """Feed the checking records to a fresh checker in file order."""
    checker = CheckerProcess(constraint)
    checking = control = 0
    for record in records:
        width = record.vc_lo.width
        if width != constraint.n or (record.vc_hi is not None and record.vc_hi.width != width):
            raise TraceFormatError(
                f"clock width {width} does not match the {constraint.n} processes of the constraint",
                record.line_number,
            )
        if record.kind is MessageKind.CONTROL:
            control += 1
            continue
        checking += 1
        try:
            checker.process(record.ga_id, record.interval(), record.time)
        except ConsistencyCheckError as e:
            raise TraceFormatError(str(e), record.line_number) from None
    checker.flush()
    logger.info(
        f"Replayed {checking} checking and {control} control records: "
        f"{len(checker.occurrences)} detections, {len(checker.satisfactions)} satisfactions"
    )
    return TraceReport(
        constraint=constraint,
        occurrences=checker.occurrences,
        satisfactions=checker.satisfactions,
        checking_records=checking,
        control_records=control,
    )
