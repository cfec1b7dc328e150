import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from app.exceptions import WorkloadError
from app.services.activity import ConstraintSpec
from app.services.harness import ExperimentResult, ScenarioParams, run_experiment
from app.services.reporting import AggregateRow, SweepAxis, SweepRow, aggregate, rank_correlation

logger = logging.getLogger(__name__)


class SweepWorker:
    """
    Runs one experiment per (axis value, seed) and merges the results.

    Each task runs in its own process with its own simulation; the merge is
    keyed by (axis value, seed), so the output does not depend on completion
    order or on the number of workers.
    """

    def __init__(
            self,
            constraint: ConstraintSpec,
            base_params: ScenarioParams,
            axis: SweepAxis,
            grid: Sequence[float],
            seeds: Sequence[int],
            max_workers: int = 4,
    ):
        if not grid:
            raise WorkloadError("sweep grid is empty")
        if not seeds:
            raise WorkloadError("sweep needs at least one seed")
        self.constraint = constraint
        self.base_params = base_params
        self.axis = axis
        self.grid = sorted(set(float(v) for v in grid))
        self.seeds = sorted(set(seeds))
        self.max_workers = max(1, max_workers)
        self.rows: List[SweepRow] = []
        self.elapsed: Optional[float] = None

    def _params(self, value: float, seed: int) -> ScenarioParams:
        return self.axis.apply(self.base_params, value).with_value("seed", seed)

    def run(self) -> List[SweepRow]:
        tasks = [(value, seed) for value in self.grid for seed in self.seeds]
        # Validate every point before starting any simulation
        for value, seed in tasks:
            self._params(value, seed)

        logger.info("=" * 70)
        logger.info(
            f"Sweep over {self.axis.value}: {len(self.grid)} values x {len(self.seeds)} seeds "
            f"= {len(tasks)} runs on {self.max_workers} workers"
        )
        started = time.time()

        results: Dict[Tuple[float, int], ExperimentResult] = {}
        if self.max_workers == 1:
            for value, seed in tasks:
                results[(value, seed)] = run_experiment(self._params(value, seed), self.constraint)
        else:
            with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
                future_to_task = {
                    executor.submit(run_experiment, self._params(value, seed), self.constraint): (value, seed)
                    for value, seed in tasks
                }
                for future in future_to_task:
                    results[future_to_task[future]] = future.result()

        self.rows = [SweepRow(value, seed, results[(value, seed)]) for value, seed in tasks]
        self.elapsed = time.time() - started

        for agg in self.aggregates():
            logger.info(
                f"  {self.axis.value}={agg.axis_value:g}: mean p={agg.mean_probability:.4f} "
                f"(std {agg.std_probability:.4f}, {agg.runs} runs)"
            )
        unsafe = sum(1 for row in self.rows if row.result.false_orderings)
        if unsafe:
            logger.error(f"{unsafe} runs reported false orderings")
        logger.info(f"Sweep finished in {self.elapsed:.2f}s, rank correlation {self.correlation():.3f}")
        logger.info("=" * 70)
        return self.rows

    def aggregates(self) -> List[AggregateRow]:
        return aggregate(self.rows)

    def correlation(self) -> float:
        return rank_correlation(self.aggregates())
