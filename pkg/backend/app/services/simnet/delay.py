"""
Message delay models and the seeded random streams behind them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

import numpy as np

from app.exceptions import DelayModelError

# spawn-key tags separating the independent random streams of one run
DELAY_STREAM = 1
WORKLOAD_STREAM = 2
PHASE_STREAM = 3
MICROTRACE_STREAM = 4


def stream(seed: int, *key: int) -> np.random.Generator:
    """Random generator for sub-stream ``key`` of master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)))


class DelayKind(str, Enum):
    EXPONENTIAL = "exponential"
    CONSTANT = "constant"


@dataclass(frozen=True, slots=True)
class DelayModel:
    kind: DelayKind
    mean: float

    def __post_init__(self):
        if not self.mean > 0:
            raise DelayModelError(f"mean delay must be positive, got {self.mean}")

    @classmethod
    def exponential(cls, mean: float) -> DelayModel:
        return cls(DelayKind.EXPONENTIAL, mean)

    @classmethod
    def constant(cls, mean: float) -> DelayModel:
        return cls(DelayKind.CONSTANT, mean)

    def sample(self, rng: np.random.Generator) -> float:
        if self.kind is DelayKind.CONSTANT:
            return float(self.mean)
        delay = float(rng.exponential(self.mean))
        # exponential draws can underflow to exactly 0.0
        return delay if delay > 0.0 else float(np.nextafter(0.0, 1.0))


class ChannelStreams:
    """One independent delay stream per (sender, receiver) channel."""

    def __init__(self, seed: int):
        self.seed = seed
        self._streams: Dict[Tuple[int, int], np.random.Generator] = {}

    def channel(self, sender: int, receiver: int) -> np.random.Generator:
        key = (sender, receiver)
        rng = self._streams.get(key)
        if rng is None:
            rng = stream(self.seed, DELAY_STREAM, sender, receiver)
            self._streams[key] = rng
        return rng
