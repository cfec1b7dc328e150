"""
Command-line front end.

    python -m app.main run --update-interval 60 --seed 7
    python -m app.main sweep --axis update-interval --grid 1,60,600,1200,5400 --seeds 0-9
    python -m app.main check-trace output/run_seed7.trace
    python -m app.main selftest --count 1000
"""

import functools
import logging
import sys
from pathlib import Path
from typing import List, Optional

import click
from pydantic import BaseModel, Field, ValidationError

from app.config import settings
from app.exceptions import ConsistencyCheckError
from app.services.activity import ConstraintSpec, load_constraint, parse_constraint
from app.services.harness import ScenarioParams, run_selftest, simulate
from app.services.reporting import (
    SweepAxis,
    plot_sweep,
    read_trace,
    replay,
    result_record,
    total_decline,
    write_csv,
    write_result_json,
    write_trace,
)
from app.services.simnet import DelayKind
from app.worker import SweepWorker

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_USAGE = 2

DEFAULT_GRIDS = {
    SweepAxis.UPDATE_INTERVAL: [1, 60, 300, 600, 1200, 2400, 3600, 5400],
    SweepAxis.MEAN_DELAY: [0.06, 0.6, 6, 60, 120, 300],
    SweepAxis.MEAN_STAY: [300, 600, 900, 1800, 3000],
}


class RunConfig(BaseModel):
    """Resolved options of one CLI invocation."""

    subcommand: str
    constraint: str = settings.DEFAULT_CONSTRAINT
    params: Optional[ScenarioParams] = None
    seeds: List[int] = Field(default_factory=list)
    out_dir: Path = Path(settings.OGA_OUTPUT_DIR)
    trace_out: Optional[Path] = None

    def prepare_output(self) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir


def handle_errors(func):
    """Domain and validation errors exit with status 2 and a one-line diagnostic."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConsistencyCheckError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_USAGE)
        except ValidationError as e:
            for err in e.errors():
                location = ".".join(str(part) for part in err["loc"]) or "params"
                click.echo(f"error: {location}: {err['msg']}", err=True)
            sys.exit(EXIT_USAGE)
        except OSError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_USAGE)

    return wrapper


def parse_seeds(text: Optional[str]) -> List[int]:
    """'0-9', '1,4,7' or a mix such as '0-3,10'."""
    if not text:
        return list(range(settings.DEFAULT_SEED_COUNT))
    seeds = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-", 1))
                seeds.update(range(lo, hi + 1))
            else:
                seeds.add(int(part))
        except ValueError:
            raise click.BadParameter(f"invalid seed list entry {part!r}", param_hint="--seeds") from None
    return sorted(seeds)


def parse_grid(text: Optional[str], axis: SweepAxis) -> List[float]:
    if text is None:
        return [float(v) for v in DEFAULT_GRIDS[axis]]
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"grid must be comma-separated numbers, got {text!r}", param_hint="--grid") from None
    if not values:
        raise click.BadParameter("grid is empty", param_hint="--grid")
    return values


def resolve_constraint(text: Optional[str], path: Optional[str]) -> ConstraintSpec:
    if path:
        return load_constraint(path)
    return parse_constraint(text or settings.DEFAULT_CONSTRAINT)


def scenario_options(func):
    options = [
        click.option("--constraint", default=None, help="Constraint text, e.g. 'AND(1,2) < AND(3,4)'"),
        click.option("--constraint-file", type=click.Path(exists=True, dir_okay=False), default=None,
                     help="Read the constraint from a file"),
        click.option("--lifetime", type=float, default=settings.DEFAULT_LIFETIME, show_default=True),
        click.option("--mean-stay-in", type=float, default=settings.DEFAULT_MEAN_STAY_IN, show_default=True),
        click.option("--mean-stay-out", type=float, default=settings.DEFAULT_MEAN_STAY_OUT, show_default=True),
        click.option("--update-interval", type=float, default=settings.DEFAULT_UPDATE_INTERVAL, show_default=True),
        click.option("--mean-delay", type=float, default=settings.DEFAULT_MEAN_DELAY, show_default=True),
        click.option("--delay-kind", type=click.Choice([k.value for k in DelayKind]),
                     default=DelayKind.EXPONENTIAL.value, show_default=True),
        click.option("--min-stay", type=float, default=settings.DEFAULT_MIN_STAY, show_default=True),
        click.option("--transit-time", type=float, default=settings.DEFAULT_TRANSIT_TIME, show_default=True),
        click.option("--out", "out_dir", type=click.Path(file_okay=False), default=settings.OGA_OUTPUT_DIR,
                     show_default=True, help="Output directory"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def build_params(seed: int, **kwargs) -> ScenarioParams:
    return ScenarioParams(
        lifetime=kwargs["lifetime"],
        mean_stay_in=kwargs["mean_stay_in"],
        mean_stay_out=kwargs["mean_stay_out"],
        update_interval=kwargs["update_interval"],
        mean_delay=kwargs["mean_delay"],
        delay_kind=DelayKind(kwargs["delay_kind"]),
        min_stay=kwargs["min_stay"],
        transit_time=kwargs["transit_time"],
        seed=seed,
    )


@click.group()
@click.option("--verbose", is_flag=True, help="Debug logging")
def cli(verbose: bool):
    """Check behavioral consistency constraints over simulated asynchronous sensors."""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


@cli.command()
@scenario_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trace-out", type=click.Path(dir_okay=False), default=None,
              help="Also write the delivered-message trace")
@handle_errors
def run(constraint, constraint_file, out_dir, seed, trace_out, **kwargs):
    """Run one experiment and print num_oga, num_phy and probability."""
    spec = resolve_constraint(constraint, constraint_file)
    config = RunConfig(
        subcommand="run",
        constraint=spec.render(),
        params=build_params(seed, **kwargs),
        seeds=[seed],
        out_dir=Path(out_dir),
        trace_out=Path(trace_out) if trace_out else None,
    )
    logger.info(f"Starting {settings.APP_NAME} v{settings.VERSION} ({settings.ENVIRONMENT}): run {config.constraint}")

    experiment = simulate(config.params, spec)
    result = experiment.result

    line = f"num_oga={result.num_oga} num_phy={result.num_phy} probability={result.probability:.6f}"
    if result.num_phy == 0:
        line += " (no complete cycle within the lifetime)"
    click.echo(line)

    out = config.prepare_output()
    write_result_json(out / f"run_seed{seed}.json", result_record(config.params, result, config.constraint))
    if config.trace_out:
        write_trace(config.trace_out, experiment.net.deliveries)
    if result.false_orderings:
        click.echo(f"warning: {result.false_orderings} false orderings", err=True)


@cli.command()
@scenario_options
@click.option("--axis", type=click.Choice([a.value for a in SweepAxis]),
              default=SweepAxis.UPDATE_INTERVAL.value, show_default=True)
@click.option("--grid", default=None, help="Comma-separated axis values")
@click.option("--seeds", default=None, help="Seed list such as 0-9 or 1,2,3")
@click.option("--workers", type=int, default=settings.SWEEP_WORKERS, show_default=True)
@handle_errors
def sweep(constraint, constraint_file, out_dir, axis, grid, seeds, workers, **kwargs):
    """Sweep one parameter and write a CSV and a plot."""
    sweep_axis = SweepAxis(axis)
    values = parse_grid(grid, sweep_axis)
    seed_list = parse_seeds(seeds)
    spec = resolve_constraint(constraint, constraint_file)
    config = RunConfig(
        subcommand="sweep",
        constraint=spec.render(),
        params=build_params(0, **kwargs),
        seeds=seed_list,
        out_dir=Path(out_dir),
    )

    worker = SweepWorker(spec, config.params, sweep_axis, values, config.seeds, max_workers=workers)
    rows = worker.run()
    aggregates = worker.aggregates()

    out = config.prepare_output()
    csv_path = write_csv(out / f"sweep_{sweep_axis.value}.csv", rows)
    plot_path = plot_sweep(aggregates, sweep_axis, out / f"sweep_{sweep_axis.value}.png", dpi=settings.PLOT_DPI)

    for agg in aggregates:
        click.echo(f"{sweep_axis.value}={agg.axis_value:g} mean={agg.mean_probability:.4f} std={agg.std_probability:.4f}")
    click.echo(f"spearman={worker.correlation():.3f} decline={total_decline(aggregates):.4f}")
    click.echo(f"csv: {csv_path}")
    click.echo(f"plot: {plot_path}")


@cli.command("check-trace")
@click.argument("trace_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--constraint", default=None)
@click.option("--constraint-file", type=click.Path(exists=True, dir_okay=False), default=None)
@handle_errors
def check_trace(trace_file, constraint, constraint_file):
    """Replay the checking messages of a trace and report detections and satisfactions."""
    spec = resolve_constraint(constraint, constraint_file)
    report = replay(read_trace(trace_file), spec)
    for line in report.render():
        click.echo(line)


@cli.command()
@click.option("--count", type=int, default=settings.SELFTEST_TRACES, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@handle_errors
def selftest(count, seed):
    """Compare the checker with the brute-force reference on random small executions."""
    report = run_selftest(count=count, seed=seed)
    status = "PASS" if report.passed else "FAIL"
    click.echo(
        f"{status}: {report.traces} traces, {report.detections} detections, "
        f"{report.satisfactions} satisfactions, {len(report.mismatches)} mismatches"
    )
    for problem in report.mismatches[:20]:
        click.echo(f"  {problem}")
    if not report.passed:
        sys.exit(1)


def main():
    cli()


if __name__ == "__main__":
    main()
