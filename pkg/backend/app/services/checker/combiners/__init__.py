"""
Interval calculation for AND- and OR-activities
"""

from app.services.activity import ActivityKind

from .base import IntervalCombiner
from .and_activity import AndCombiner
from .or_activity import OrCombiner

# Registry for lookup by activity kind
COMBINER_CLASSES = {
    ActivityKind.AND: AndCombiner,
    ActivityKind.OR: OrCombiner,
}

__all__ = [
    'IntervalCombiner',
    'AndCombiner',
    'OrCombiner',
    'COMBINER_CLASSES',
]
