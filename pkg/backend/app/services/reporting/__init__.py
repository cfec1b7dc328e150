from .results import (
    AggregateRow,
    SweepAxis,
    SweepRow,
    aggregate,
    rank_correlation,
    read_aggregates,
    render_csv,
    result_record,
    total_decline,
    write_csv,
    write_result_json,
)
from .trace import TraceRecord, TraceReport, format_delivery, parse_line, read_trace, replay, write_trace
from .plots import plot_sweep

__all__ = [
    'AggregateRow',
    'SweepAxis',
    'SweepRow',
    'TraceRecord',
    'TraceReport',
    'aggregate',
    'format_delivery',
    'parse_line',
    'plot_sweep',
    'rank_correlation',
    'read_aggregates',
    'read_trace',
    'render_csv',
    'replay',
    'result_record',
    'total_decline',
    'write_csv',
    'write_result_json',
    'write_trace',
]
