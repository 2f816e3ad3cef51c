"""Per-device learning loop: sweep, select, transmit, observe, detect, reset.

Each device first transmits once on every arm in index order, then follows
the UCB1-tuned policy. ACKs observed under policy selection land in the
device's history; with change detection enabled the history is tested
after each transmission (once it holds two whole windows) and a detection
zeroes the bandit statistics and the history and restarts the sweep.

Sweep observations update the bandit statistics and the record log but
stay out of the detector's history: a sweep probes every arm including
whichever ones the environment currently disables, so its mixed outcomes
are drawn from a different selection distribution than the converged
stream that follows. Feeding them to the detector makes the sweep-to-
convergence transition itself look like an environment change and locks
the device into a reset loop; keeping the history policy-homogeneous
leaves detection to genuine shifts.

A carrier-busy skip never keys the radio, so it cannot seed an arm's
first sample: an unplayed arm stays unplayed (and keeps its infinite
selection priority) until a real transmission happens on it. Once an arm
holds at least one genuine sample, later busy skips do count as
zero-reward pulls; that decay is what spreads contending devices across
arms instead of letting one winner pin everyone else down.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import bandit as bandit_mod
from . import change_detect
from .bandit import BanditState, ParameterSet
from .change_detect import AckHistory
from .energy_model import EnergyProfile, TransmissionCost
from .environment import AckOutcome, Environment, FailureCause

__all__ = [
    "Mode",
    "TransmissionRecord",
    "RecordLog",
    "Agent",
    "next_arm",
    "observe",
    "run_episode",
]


class Mode(enum.Enum):
    INITIAL_SWEEP = "initial_sweep"
    LEARNING = "learning"


@dataclass(frozen=True)
class TransmissionRecord:
    transmission_index: int
    arm: ParameterSet
    arm_index: int
    success: bool
    failure_cause: FailureCause
    raw_reward: float
    normalized_reward: float
    e_active: float
    sic_statistic: float  # NaN when detection did not run
    reset_triggered: bool
    in_sweep: bool


class RecordLog:
    """Columnar per-device transmission log (one row per transmission)."""

    def __init__(self, arms: list[ParameterSet], capacity: int):
        self.arms = arms
        self.length = 0
        self.arm_index = np.zeros(capacity, dtype=np.int32)
        self.success = np.zeros(capacity, dtype=np.uint8)
        self.failure_cause = np.zeros(capacity, dtype=np.uint8)
        self.raw_reward = np.zeros(capacity)
        self.normalized_reward = np.zeros(capacity)
        self.e_active = np.zeros(capacity)
        self.sic_statistic = np.full(capacity, math.nan)
        self.reset_triggered = np.zeros(capacity, dtype=np.uint8)
        self.in_sweep = np.zeros(capacity, dtype=np.uint8)

    def __len__(self) -> int:
        return self.length

    def append(
        self,
        arm_index: int,
        success: bool,
        failure_cause: FailureCause,
        raw_reward: float,
        normalized_reward: float,
        e_active: float,
        sic_statistic: float,
        reset_triggered: bool,
        in_sweep: bool,
    ) -> None:
        i = self.length
        self.arm_index[i] = arm_index
        self.success[i] = success
        self.failure_cause[i] = int(failure_cause)
        self.raw_reward[i] = raw_reward
        self.normalized_reward[i] = normalized_reward
        self.e_active[i] = e_active
        self.sic_statistic[i] = sic_statistic
        self.reset_triggered[i] = reset_triggered
        self.in_sweep[i] = in_sweep
        self.length = i + 1

    def row(self, i: int) -> TransmissionRecord:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return TransmissionRecord(
            transmission_index=i + 1,
            arm=self.arms[self.arm_index[i]],
            arm_index=int(self.arm_index[i]),
            success=bool(self.success[i]),
            failure_cause=FailureCause(int(self.failure_cause[i])),
            raw_reward=float(self.raw_reward[i]),
            normalized_reward=float(self.normalized_reward[i]),
            e_active=float(self.e_active[i]),
            sic_statistic=float(self.sic_statistic[i]),
            reset_triggered=bool(self.reset_triggered[i]),
            in_sweep=bool(self.in_sweep[i]),
        )

    def __iter__(self):
        return (self.row(i) for i in range(self.length))


class Agent:
    """One device's complete learning state."""

    def __init__(
        self,
        device_id: int,
        bandit: BanditState,
        history: AckHistory,
        costs: list[TransmissionCost],
        profile: EnergyProfile,
        payload_bits: int,
        sic_enabled: bool,
        theta: float,
        horizon: int,
    ):
        if len(costs) != len(bandit.arms):
            raise ValueError("need one transmission cost per arm")
        self.device_id = device_id
        self.bandit = bandit
        self.history = history
        self.costs = costs
        self.profile = profile
        self.payload_bits = payload_bits
        self.sic_enabled = sic_enabled
        self.theta = theta
        self.mode = Mode.INITIAL_SWEEP
        self.sweep_cursor = 0
        self.records = RecordLog(bandit.arms, horizon)
        self._pending_arm = -1
        self._pending_sweep = False

        # Rewards are deterministic per arm given success; precompute the
        # raw values and their [0, 1] normalization by the best raw reward
        # achievable across the arm set.
        self._raw_reward = np.array(
            [payload_bits / c.e_toa for c in costs], dtype=np.float64
        )
        self._norm_reward = self._raw_reward / self._raw_reward.max()
        self._e_active = np.array([c.e_active for c in costs], dtype=np.float64)
        # a carrier-busy skip wakes up and processes but never keys the radio
        self._e_skip = profile.e_wakeup + profile.e_processing
        self._min_windows_len = 2 * history.window_length

    @property
    def arms(self) -> list[ParameterSet]:
        return self.bandit.arms

    @property
    def t(self) -> int:
        """Completed transmissions since the last reset."""
        return self.bandit.total_steps

    def next_arm_index(self) -> int:
        if self._pending_arm != -1:
            raise RuntimeError("previous transmission has no outcome yet")
        if self.mode is Mode.INITIAL_SWEEP:
            i = self.sweep_cursor
            self._pending_sweep = True
            self.sweep_cursor += 1
            if self.sweep_cursor >= len(self.bandit):
                self.mode = Mode.LEARNING
        else:
            i = self.bandit.select_index()
            self._pending_sweep = False
        self._pending_arm = i
        return i

    def observe(self, outcome: AckOutcome, transmitted: bool = True) -> None:
        i = self._pending_arm
        if i == -1:
            raise RuntimeError("no transmission pending")
        self._pending_arm = -1

        in_sweep = self._pending_sweep
        success = outcome.success
        raw = float(self._raw_reward[i]) if success else 0.0
        norm = float(self._norm_reward[i]) if success else 0.0
        if transmitted or self.bandit.count(i) > 0:
            self.bandit.update_index(i, norm)
        if not in_sweep:
            self.history.append(1 if success else 0)
        e_active = float(self._e_active[i]) if transmitted else self._e_skip

        sic_statistic = math.nan
        reset_triggered = False
        if self.sic_enabled and len(self.history) >= self._min_windows_len:
            result = change_detect.detect(self.history, self.theta)
            sic_statistic = result.statistic
            if result.detected:
                bandit_mod.reset(self.bandit)
                self.history.clear()
                self.mode = Mode.INITIAL_SWEEP
                self.sweep_cursor = 0
                reset_triggered = True

        self.records.append(
            arm_index=i,
            success=success,
            failure_cause=outcome.failure_cause,
            raw_reward=raw,
            normalized_reward=norm,
            e_active=e_active,
            sic_statistic=sic_statistic,
            reset_triggered=reset_triggered,
            in_sweep=in_sweep,
        )


def next_arm(agent: Agent) -> ParameterSet:
    """Arm for the device's next transmission (sweep order first, then
    highest score)."""
    return agent.arms[agent.next_arm_index()]


def observe(agent: Agent, outcome: AckOutcome, cost: TransmissionCost) -> Agent:
    """Feed one transmission outcome back into the device's state."""
    transmitted = outcome.failure_cause is not FailureCause.CARRIER_BUSY
    del cost  # the agent tracks per-arm costs itself; kept for call symmetry
    agent.observe(outcome, transmitted=transmitted)
    return agent


def run_episode(agents: list[Agent], env: Environment, horizon: int) -> list[RecordLog]:
    """Advance the shared event clock through `horizon` rounds.

    Devices act in fixed offset order each round; outcomes resolve when
    their airtime expires, always before the same device's next attempt.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    start_times = env.start_times
    order = np.argsort(start_times[:, 0], kind="stable")
    for n in range(1, horizon + 1):
        for g in order:
            g = int(g)
            s = float(start_times[g, n - 1])
            for dev, outcome in env.expired(s):
                agents[dev].observe(outcome, transmitted=True)
            agent = agents[g]
            i = agent.next_arm_index()
            arm = agent.arms[i]
            immediate = env.submit(g, n, arm, agent.costs[i].t_toa, s)
            if immediate is not None:
                agent.observe(immediate, transmitted=False)
    for dev, outcome in env.drain():
        agents[dev].observe(outcome, transmitted=True)
    return [a.records for a in agents]
