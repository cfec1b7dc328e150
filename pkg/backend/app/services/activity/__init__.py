from .model import (
    ActivityKind,
    ConstraintSpec,
    GlobalActivitySpec,
    TimedInterval,
    intervals_overlap,
)
from .constraint import load_constraint, parse_constraint, render_constraint

SMART_LOCK_CONSTRAINT = "AND(1,2) < AND(3,4)"

__all__ = [
    'ActivityKind',
    'ConstraintSpec',
    'GlobalActivitySpec',
    'TimedInterval',
    'intervals_overlap',
    'load_constraint',
    'parse_constraint',
    'render_constraint',
    'SMART_LOCK_CONSTRAINT',
]
