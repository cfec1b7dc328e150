"""
harness/experiment.py
=====================
One experiment: workload -> update-interval filter -> agents -> simulated
network -> checker, then the physical-time oracle.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Dict

from pydantic import BaseModel, Field

from app.services.activity import ConstraintSpec
from app.services.agent import ContextAgent
from app.services.checker import CheckerProcess
from app.services.simnet import DelayModel, SimEvent, SimNet
from .oracle import OracleVerdict, physical_oracle
from .sensors import ObservedSchedule, apply_update_interval
from .workload import GroundTruth, ScenarioParams, generate_workload

logger = logging.getLogger(__name__)


class ExperimentResult(BaseModel):
    num_oga: int = Field(ge=0)
    num_phy: int = Field(ge=0)
    probability: float = Field(ge=0)
    seed: int = 0
    false_orderings: int = 0
    controls_sent: int = 0
    checking_sent: int = 0
    suppressed_intervals: int = 0
    crossings: int = 0
    overwritten_changes: int = 0
    comparisons: Dict[str, int] = Field(default_factory=dict)


@dataclass
class ExperimentRun:
    """Everything a single run produced, for traces and post-mortems."""

    params: ScenarioParams
    constraint: ConstraintSpec
    truth: GroundTruth
    observed: ObservedSchedule
    agents: Dict[int, ContextAgent]
    checker: CheckerProcess
    net: SimNet
    verdict: OracleVerdict
    result: ExperimentResult


def build_agents(constraint: ConstraintSpec) -> Dict[int, ContextAgent]:
    return {
        pid: ContextAgent(pid, ga, constraint.n)
        for ga in constraint
        for pid in ga.members
    }


def zone_gateways(constraint: ConstraintSpec) -> Dict[int, int]:
    """Sensors of one activity report through one gateway."""
    return {pid: ga.ga_id for ga in constraint for pid in ga.members}


def probability(num_oga: int, num_phy: int) -> float:
    return num_oga / num_phy if num_phy else 0.0


def simulate(params: ScenarioParams, constraint: ConstraintSpec) -> ExperimentRun:
    started = time.perf_counter()

    truth, transitions = generate_workload(params, constraint)
    observed = apply_update_interval(
        transitions,
        params.update_interval,
        params.seed,
        pids=range(1, constraint.n + 1),
        groups=zone_gateways(constraint),
    )

    agents = build_agents(constraint)
    checker = CheckerProcess(constraint)
    net = SimNet(
        agents,
        checker,
        DelayModel(params.delay_kind, params.mean_delay),
        seed=params.seed,
        lifetime=params.lifetime,
    )
    net.run_until_quiescent(
        SimEvent.transition(o.time, o.pid, o.up) for o in observed.transitions
    )

    satisfactions = checker.satisfactions
    verdict = physical_oracle(truth, satisfactions)
    stats = [agent.stats for agent in agents.values()]
    summary = checker.summary()

    result = ExperimentResult(
        num_oga=len(satisfactions),
        num_phy=truth.num_phy,
        probability=probability(len(satisfactions), truth.num_phy),
        seed=params.seed,
        false_orderings=verdict.false_orderings,
        controls_sent=sum(s.controls_sent for s in stats),
        checking_sent=sum(s.checking_sent for s in stats),
        suppressed_intervals=sum(s.suppressed_intervals for s in stats),
        crossings=net.stats.crossings,
        overwritten_changes=observed.overwritten,
        comparisons=summary.comparisons,
    )
    logger.info(
        f"seed={params.seed} U={params.update_interval}s delay={params.mean_delay}s: "
        f"num_oga={result.num_oga} num_phy={result.num_phy} p={result.probability:.4f} "
        f"({time.perf_counter() - started:.2f}s)"
    )
    return ExperimentRun(
        params=params,
        constraint=constraint,
        truth=truth,
        observed=observed,
        agents=agents,
        checker=checker,
        net=net,
        verdict=verdict,
        result=result,
    )


def run_experiment(params: ScenarioParams, constraint: ConstraintSpec) -> ExperimentResult:
    return simulate(params, constraint).result