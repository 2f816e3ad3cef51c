"""UCB1-tuned arm statistics, selection, update, and reset for one device.

Arm scores combine the empirical mean reward with an exploration bonus
scaled by a variance estimate clamped at 1/4. The variance estimate is the
population variance of rewards observed on that arm; setting
``variance_padding=True`` adds the sqrt(2 ln t / N) padding term inside
the clamp instead (off by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = ["ParameterSet", "ArmStats", "BanditState", "ucb1_tuned_score", "select_arm", "update", "reset"]


@dataclass(frozen=True)
class ParameterSet:
    """One selectable (channel, transmit power, bandwidth) combination."""

    channel_id: int
    center_frequency: float
    bandwidth: float
    tx_power: int

    @property
    def label(self) -> str:
        mhz = self.center_frequency / 1e6
        khz = int(round(self.bandwidth / 1e3))
        return f"{mhz:.1f}MHz/{khz}kHz/{self.tx_power:+d}dBm"


@dataclass(frozen=True)
class ArmStats:
    """Snapshot of one arm's learning state."""

    cumulative_reward: float = 0.0
    selection_count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    last_score: float = 0.0

    @property
    def variance(self) -> float:
        if self.selection_count == 0:
            return 0.0
        return self.m2 / self.selection_count


class BanditState:
    """Learning state over an ordered arm list, array-backed for speed.

    The arrays are owned by this object; `stats()` returns immutable
    snapshots for inspection and metrics.
    """

    def __init__(self, arms: list[ParameterSet], variance_padding: bool = False):
        if not arms:
            raise ValueError("arm set must not be empty")
        if len({(a.channel_id, a.tx_power, a.bandwidth) for a in arms}) != len(arms):
            raise ValueError("arm set contains duplicate parameter combinations")
        self.arms: list[ParameterSet] = list(arms)
        self.variance_padding = variance_padding
        self.total_steps = 0
        k = len(arms)
        self._sums = np.zeros(k)
        self._counts = np.zeros(k, dtype=np.int64)
        self._means = np.zeros(k)
        self._m2 = np.zeros(k)
        self._scores = np.zeros(k)
        self._index = {arm: i for i, arm in enumerate(self.arms)}

    def __len__(self) -> int:
        return len(self.arms)

    def arm_index(self, arm: ParameterSet) -> int:
        return self._index[arm]

    def count(self, i: int) -> int:
        return int(self._counts[i])

    def stats(self, i: int) -> ArmStats:
        return ArmStats(
            cumulative_reward=float(self._sums[i]),
            selection_count=int(self._counts[i]),
            mean=float(self._means[i]),
            m2=float(self._m2[i]),
            last_score=float(self._scores[i]),
        )

    def snapshot(self) -> list[ArmStats]:
        return [self.stats(i) for i in range(len(self.arms))]

    # fast paths used by the agent loop

    def select_index(self) -> int:
        return _kernels.ucb_select(
            self._means,
            self._m2,
            self._counts,
            self.total_steps,
            self.variance_padding,
            self._scores,
        )

    def update_index(self, i: int, normalized_reward: float) -> None:
        if not 0.0 <= normalized_reward <= 1.0:
            raise ValueError(
                f"normalized reward must be in [0, 1], got {normalized_reward}"
            )
        n = int(self._counts[i]) + 1
        self._counts[i] = n
        self._sums[i] += normalized_reward
        delta = normalized_reward - self._means[i]
        self._means[i] += delta / n
        self._m2[i] += delta * (normalized_reward - self._means[i])
        self.total_steps += 1


def ucb1_tuned_score(stats: ArmStats, t: int, padded: bool = False) -> float:
    """Score one arm: mean + sqrt((ln t / N) * min(1/4, V)).

    An unplayed arm scores +inf so the policy always brings it into play.
    """
    if stats.selection_count == 0:
        return math.inf
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    n = stats.selection_count
    variance = stats.m2 / n
    if padded:
        variance += math.sqrt(2.0 * math.log(t) / n)
    return stats.mean + math.sqrt((math.log(t) / n) * min(0.25, variance))


def select_arm(state: BanditState) -> ParameterSet:
    """Return the arm with the highest score; ties go to the lowest index."""
    return state.arms[state.select_index()]


def update(state: BanditState, arm: ParameterSet, normalized_reward: float) -> BanditState:
    """Record one observed reward for `arm` (in place; returns the state)."""
    state.update_index(state.arm_index(arm), normalized_reward)
    return state


def reset(state: BanditState) -> BanditState:
    """Zero every arm's statistics and the step counter, keeping the arm
    list and order intact (in place; returns the state)."""
    state._sums[:] = 0.0
    state._counts[:] = 0
    state._means[:] = 0.0
    state._m2[:] = 0.0
    state._scores[:] = 0.0
    state.total_steps = 0
    return state
