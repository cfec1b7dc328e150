"""
harness/workload.py
===================
Smart-lock style workload: the user walks through the zones of the
constraint in order (office, then corridor for the two-activity lock),
staying a minimum time plus an exponentially distributed extra in each and
walking between zones for a fixed transit time. While the user is in a zone
the local predicates of every sensor of that zone are true.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.services.activity import ConstraintSpec
from app.services.simnet import WORKLOAD_STREAM, DelayKind, stream

logger = logging.getLogger(__name__)

TWENTY_DAYS = 20 * 24 * 3600.0


class ScenarioParams(BaseModel):
    """One experiment configuration. Times are simulated seconds."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    lifetime: float = Field(default=TWENTY_DAYS, ge=0, description="Simulated lifetime of the application")
    mean_stay_in: float = Field(default=600.0, gt=0, description="Average stay in the first zone (office)")
    mean_stay_out: float = Field(default=300.0, gt=0, description="Average stay in every later zone (corridor)")
    update_interval: float = Field(default=1.0, ge=0, description="Sensor dissemination period, 0 = ideal sensor")
    mean_delay: float = Field(default=0.06, gt=0, description="Mean message delay")
    delay_kind: DelayKind = Field(default=DelayKind.EXPONENTIAL)
    min_stay: float = Field(default=120.0, ge=0, description="Shortest stay in any zone")
    transit_time: float = Field(default=300.0, ge=0, description="Walking time after every stay")
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _means_above_min_stay(self) -> ScenarioParams:
        for name in ("mean_stay_in", "mean_stay_out"):
            if getattr(self, name) <= self.min_stay:
                raise ValueError(f"{name} must exceed min_stay ({self.min_stay}s)")
        return self

    def with_value(self, name: str, value) -> ScenarioParams:
        return self.model_validate({**self.model_dump(), name: value})


@dataclass(frozen=True, slots=True)
class ZoneStay:
    ga_id: int
    entry: float
    exit: float


@dataclass(frozen=True, slots=True)
class UserCycle:
    """One pass through zones 1..m."""

    ordinal: int
    stays: Tuple[ZoneStay, ...]

    @property
    def start(self) -> float:
        return self.stays[0].entry

    @property
    def last_entry(self) -> float:
        return self.stays[-1].entry

    def is_ordered(self, lifetime: float) -> bool:
        """Every stay is non-empty, stays do not overlap, and the cycle ends within the lifetime."""
        for stay in self.stays:
            if not stay.entry < stay.exit:
                return False
        for before, after in zip(self.stays, self.stays[1:]):
            if after.entry < before.exit:
                return False
        return self.stays[-1].exit <= lifetime


@dataclass(frozen=True, slots=True)
class Transition:
    """True change of a sensor's local predicate."""

    time: float
    pid: int
    up: bool


@dataclass
class GroundTruth:
    lifetime: float
    cycles: List[UserCycle] = field(default_factory=list)

    @property
    def complete_cycles(self) -> List[UserCycle]:
        return [c for c in self.cycles if c.is_ordered(self.lifetime)]

    @property
    def num_phy(self) -> int:
        return len(self.complete_cycles)


# ga_id of a zone -> duration of one stay in it
DurationSampler = Callable[[int], float]


def _exponential_sampler(params: ScenarioParams) -> DurationSampler:
    rng = stream(params.seed, WORKLOAD_STREAM)

    def sample(ga_id: int) -> float:
        mean = params.mean_stay_in if ga_id == 1 else params.mean_stay_out
        return params.min_stay + float(rng.exponential(mean - params.min_stay))

    return sample


def generate_workload(
        params: ScenarioParams,
        constraint: ConstraintSpec,
        durations: Optional[DurationSampler] = None,
) -> Tuple[GroundTruth, List[Transition]]:
    """
    Alternate zone stays until the lifetime is reached.

    Stays that end after the lifetime produce no transitions; a cycle cut by
    the lifetime is kept in the ground truth but not counted in num_phy.
    """
    sample = durations or _exponential_sampler(params)
    truth = GroundTruth(lifetime=params.lifetime)
    transitions: List[Transition] = []

    now = 0.0
    ordinal = 0
    while now < params.lifetime:
        ordinal += 1
        stays = []
        for ga in constraint:
            if now >= params.lifetime:
                break
            exit_time = now + sample(ga.ga_id)
            stays.append(ZoneStay(ga.ga_id, now, exit_time))
            if exit_time <= params.lifetime:
                for pid in ga.members:
                    transitions.append(Transition(now, pid, True))
                    transitions.append(Transition(exit_time, pid, False))
            now = exit_time + params.transit_time
        if len(stays) == constraint.m:
            truth.cycles.append(UserCycle(ordinal, tuple(stays)))

    transitions.sort(key=lambda t: (t.time, t.up, t.pid))
    logger.debug(
        f"Workload seed={params.seed}: {len(truth.cycles)} cycles "
        f"({truth.num_phy} complete), {len(transitions)} transitions"
    )
    return truth, transitions
