"""
Sweep result tables: per-run rows, per-axis-value aggregates, CSV and JSON
output, and the rank-correlation used to judge the trend of a sweep.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

import numpy as np
from scipy import stats

from app.services.harness import ExperimentResult, ScenarioParams

logger = logging.getLogger(__name__)

CSV_HEADER = ["axis_value", "seed", "num_oga", "num_phy", "probability", "std"]
AGGREGATE_MARK = "mean"


class SweepAxis(str, Enum):
    UPDATE_INTERVAL = "update-interval"
    MEAN_DELAY = "mean-delay"
    MEAN_STAY = "mean-stay"

    @property
    def field(self) -> str:
        return {
            SweepAxis.UPDATE_INTERVAL: "update_interval",
            SweepAxis.MEAN_DELAY: "mean_delay",
            SweepAxis.MEAN_STAY: "mean_stay_in",
        }[self]

    @property
    def label(self) -> str:
        return {
            SweepAxis.UPDATE_INTERVAL: "Update interval (s)",
            SweepAxis.MEAN_DELAY: "Mean message delay (s)",
            SweepAxis.MEAN_STAY: "Average stay in office (s)",
        }[self]

    def apply(self, params: ScenarioParams, value: float) -> ScenarioParams:
        return params.with_value(self.field, value)


@dataclass(frozen=True, slots=True)
class SweepRow:
    axis_value: float
    seed: int
    result: ExperimentResult


@dataclass(frozen=True, slots=True)
class AggregateRow:
    axis_value: float
    runs: int
    mean_num_oga: float
    mean_num_phy: float
    mean_probability: float
    std_probability: float


def _num(value: float) -> str:
    """Axis values print as integers when they are whole."""
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def aggregate(rows: Iterable[SweepRow]) -> List[AggregateRow]:
    groups: Dict[float, List[SweepRow]] = {}
    for row in rows:
        groups.setdefault(row.axis_value, []).append(row)

    aggregates = []
    for value in sorted(groups):
        group = groups[value]
        probs = np.array([r.result.probability for r in group], dtype=float)
        aggregates.append(AggregateRow(
            axis_value=value,
            runs=len(group),
            mean_num_oga=float(np.mean([r.result.num_oga for r in group])),
            mean_num_phy=float(np.mean([r.result.num_phy for r in group])),
            mean_probability=float(probs.mean()),
            std_probability=float(probs.std(ddof=1)) if len(group) > 1 else 0.0,
        ))
    return aggregates


def rank_correlation(aggregates: Sequence[AggregateRow]) -> float:
    """Spearman correlation of mean probability against the axis value (nan when undefined)."""
    if len(aggregates) < 2:
        return math.nan
    means = [a.mean_probability for a in aggregates]
    if len(set(means)) == 1:
        return math.nan
    rho, _ = stats.spearmanr([a.axis_value for a in aggregates], means)
    return float(rho)


def total_decline(aggregates: Sequence[AggregateRow]) -> float:
    if not aggregates:
        return 0.0
    return aggregates[0].mean_probability - aggregates[-1].mean_probability


def render_csv(rows: Sequence[SweepRow]) -> str:
    ordered = sorted(rows, key=lambda r: (r.axis_value, r.seed))
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in ordered:
        writer.writerow([
            _num(row.axis_value),
            row.seed,
            row.result.num_oga,
            row.result.num_phy,
            f"{row.result.probability:.6f}",
            "",
        ])
    for agg in aggregate(ordered):
        writer.writerow([
            _num(agg.axis_value),
            AGGREGATE_MARK,
            f"{agg.mean_num_oga:.3f}",
            f"{agg.mean_num_phy:.3f}",
            f"{agg.mean_probability:.6f}",
            f"{agg.std_probability:.6f}",
        ])
    return buffer.getvalue()


def write_csv(path: Union[str, Path], rows: Sequence[SweepRow]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(rows), encoding="utf-8")
    logger.info(f"Wrote {len(rows)} runs to {path}")
    return path


def read_aggregates(path: Union[str, Path]) -> List[AggregateRow]:
    """Aggregate rows of a CSV written by ``write_csv``."""
    aggregates = []
    with open(path, encoding="utf-8", newline="") as f:
        for record in csv.DictReader(f):
            if record["seed"] != AGGREGATE_MARK:
                continue
            aggregates.append(AggregateRow(
                axis_value=float(record["axis_value"]),
                runs=0,
                mean_num_oga=float(record["num_oga"]),
                mean_num_phy=float(record["num_phy"]),
                mean_probability=float(record["probability"]),
                std_probability=float(record["std"]),
            ))
    return aggregates


def result_record(params: ScenarioParams, result: ExperimentResult, constraint: str) -> Dict:
    return {
        "constraint": constraint,
        "params": params.model_dump(mode="json"),
        "result": result.model_dump(mode="json"),
    }


def write_result_json(path: Union[str, Path], record: Dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote result record to {path}")
    return path
