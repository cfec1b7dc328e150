from .workload import GroundTruth, ScenarioParams, Transition, UserCycle, ZoneStay, generate_workload
from .sensors import SENSOR_BUFFER, ObservedSchedule, ObservedTransition, apply_update_interval, next_tick, retained_changes
from .oracle import OracleVerdict, physical_oracle
from .experiment import ExperimentResult, ExperimentRun, build_agents, probability, run_experiment, simulate, zone_gateways
from .selftest import SelftestReport, run_selftest

__all__ = [
    'ExperimentResult',
    'ExperimentRun',
    'GroundTruth',
    'ObservedSchedule',
    'ObservedTransition',
    'OracleVerdict',
    'SENSOR_BUFFER',
    'ScenarioParams',
    'SelftestReport',
    'Transition',
    'UserCycle',
    'ZoneStay',
    'apply_update_interval',
    'build_agents',
    'generate_workload',
    'next_tick',
    'physical_oracle',
    'probability',
    'retained_changes',
    'run_experiment',
    'run_selftest',
    'simulate',
    'zone_gateways',
]
