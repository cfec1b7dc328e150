from .checker import CheckerProcess, CheckerRecord, CheckerSummary
from .detection import GaDetector, GaOccurrence, compute_interval
from .metrics import ComparisonCounter
from .ordering import OrderingCursor, SatisfactionEvent

__all__ = [
    'CheckerProcess',
    'CheckerRecord',
    'CheckerSummary',
    'ComparisonCounter',
    'GaDetector',
    'GaOccurrence',
    'OrderingCursor',
    'SatisfactionEvent',
    'compute_interval',
]
