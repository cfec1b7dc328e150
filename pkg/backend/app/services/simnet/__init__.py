from .delay import (
    DELAY_STREAM,
    MICROTRACE_STREAM,
    PHASE_STREAM,
    WORKLOAD_STREAM,
    ChannelStreams,
    DelayKind,
    DelayModel,
    stream,
)
from .engine import EventKind, ExecutionRecord, NetworkStats, SimEvent, SimNet, schedule_send

__all__ = [
    'DELAY_STREAM',
    'MICROTRACE_STREAM',
    'PHASE_STREAM',
    'WORKLOAD_STREAM',
    'ChannelStreams',
    'DelayKind',
    'DelayModel',
    'EventKind',
    'ExecutionRecord',
    'NetworkStats',
    'SimEvent',
    'SimNet',
    'schedule_send',
    'stream',
]
