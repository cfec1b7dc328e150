"""
Static sweep figures: mean probability of correct ordering against the
swept parameter, with one standard deviation as error bars.
"""

import logging
from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .results import AggregateRow, SweepAxis  # noqa: E402

logger = logging.getLogger(__name__)


def plot_sweep(
        aggregates: Sequence[AggregateRow],
        axis: SweepAxis,
        path: Union[str, Path],
        title: str = "",
        dpi: int = 150,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    xs = [a.axis_value for a in aggregates]
    ys = [a.mean_probability for a in aggregates]
    errs = [a.std_probability for a in aggregates]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.errorbar(xs, ys, yerr=errs, marker="o", capsize=3, linewidth=1.5)
    ax.set_xlabel(axis.label)
    ax.set_ylabel("Probability of correct ordering")
    ax.set_ylim(0.0, 1.05)
    if len(xs) > 1 and min(xs) > 0 and max(xs) / min(xs) >= 100:
        ax.set_xscale("log")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)

    plt.tight_layout()
    plt.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    logger.info(f"Saved {axis.value} plot to {path}")
    return path
