"""Decentralized transmission-parameter selection for dynamic LoRa networks.

Each simulated end device runs a UCB1-tuned bandit over (channel,
transmit power, bandwidth) combinations; a change detector over the ACK
stream resets learning when the channel environment shifts. The package
bundles the algorithms, a discrete-event network simulator, and a CLI
that writes CSV metrics.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .agent import Agent, RecordLog, TransmissionRecord, run_episode
from .bandit import ArmStats, BanditState, ParameterSet, select_arm, ucb1_tuned_score
from .change_detect import AckHistory, SicResult, WindowStats, detect, detect_bits, windowize
from .energy_model import (
    EnergyProfile,
    RadioParams,
    TransmissionCost,
    energy_efficiency,
    payload_symbol_count,
    preamble_duration,
    reward,
    symbol_duration,
    transmission_cost,
)
from .environment import (
    AckOutcome,
    Channel,
    Environment,
    FailureCause,
    Phase,
    PhaseSchedule,
    TransmissionAttempt,
    carrier_sense,
    channel_available,
    resolve_outcome,
    schedule_transmissions,
)
from .metrics import MetricsReport, build_report, emit_csv
from .runner import run, run_methods, run_replication
from .scenario import Scenario, ScenarioError, build_arms, load_scenario, save_scenario

__all__ = [
    "KERNEL_BACKEND",
    "__version__",
    "Agent",
    "RecordLog",
    "TransmissionRecord",
    "run_episode",
    "ArmStats",
    "BanditState",
    "ParameterSet",
    "select_arm",
    "ucb1_tuned_score",
    "AckHistory",
    "SicResult",
    "WindowStats",
    "detect",
    "detect_bits",
    "windowize",
    "EnergyProfile",
    "RadioParams",
    "TransmissionCost",
    "energy_efficiency",
    "payload_symbol_count",
    "preamble_duration",
    "reward",
    "symbol_duration",
    "transmission_cost",
    "AckOutcome",
    "Channel",
    "Environment",
    "FailureCause",
    "Phase",
    "PhaseSchedule",
    "TransmissionAttempt",
    "carrier_sense",
    "channel_available",
    "resolve_outcome",
    "schedule_transmissions",
    "MetricsReport",
    "build_report",
    "emit_csv",
    "run",
    "run_methods",
    "run_replication",
    "Scenario",
    "ScenarioError",
    "build_arms",
    "load_scenario",
    "save_scenario",
]
