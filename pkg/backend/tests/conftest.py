# backend/tests/conftest.py
import os
import sys

import pytest

# Add backend directory to path
backend_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if backend_dir not in sys.path:
    sys.path.insert(0, backend_dir)

from app.services.activity import SMART_LOCK_CONSTRAINT, TimedInterval, parse_constraint  # noqa: E402
from app.services.clock import VectorClock  # noqa: E402


def VC(*entries: int) -> VectorClock:
    return VectorClock.of(entries)


def IV(owner: int, lo, hi, seq: int = 1, phys_lo: float = 0.0, phys_hi: float = 0.0) -> TimedInterval:
    """Interval factory taking clocks as plain lists."""
    return TimedInterval(owner, VectorClock.of(lo), VectorClock.of(hi), seq, phys_lo, phys_hi)


@pytest.fixture
def smart_lock():
    return parse_constraint(SMART_LOCK_CONSTRAINT)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-lifetime multi-seed sweeps")
