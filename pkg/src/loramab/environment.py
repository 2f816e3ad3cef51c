"""Network environment: channel schedule, carrier sensing, collisions, ACKs.

The model is deliberately simple. Channels are disjoint; a scheduled
"disabled" phase makes every transmission on the affected channels fail;
two transmissions interfere only when their airtime intervals overlap on
the same channel, and any overlap destroys all involved transmissions.
Carrier sensing is ideal: an attempt whose start falls inside another
station's ongoing transmission on the same channel is skipped (and counts
as a failed transmission, since there are no retries).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bandit import ParameterSet

__all__ = [
    "Channel",
    "Phase",
    "PhaseSchedule",
    "TransmissionAttempt",
    "FailureCause",
    "AckOutcome",
    "channel_available",
    "carrier_sense",
    "resolve_outcome",
    "schedule_transmissions",
    "Environment",
]


@dataclass(frozen=True)
class Channel:
    id: int
    center_frequency: float
    bandwidth: float


@dataclass(frozen=True)
class Phase:
    """One schedule entry: transmissions [start, end] (1-based, inclusive)
    during which `disabled` channel ids fail deterministically."""

    start: int
    end: int
    disabled: frozenset[int]


class PhaseSchedule:
    """Contiguous phases covering transmission indices 1..horizon."""

    def __init__(self, phases):
        phases = [
            p if isinstance(p, Phase) else Phase(p[0], p[1], frozenset(p[2]))
            for p in phases
        ]
        if not phases:
            raise ValueError("schedule needs at least one phase")
        if phases[0].start != 1:
            raise ValueError(f"first phase must start at 1, got {phases[0].start}")
        for prev, cur in zip(phases, phases[1:]):
            if cur.start != prev.end + 1:
                raise ValueError(
                    f"phases must be contiguous: [{prev.start},{prev.end}] "
                    f"followed by [{cur.start},{cur.end}]"
                )
        for p in phases:
            if p.end < p.start:
                raise ValueError(f"empty phase interval [{p.start},{p.end}]")
        self.phases: tuple[Phase, ...] = tuple(phases)

    @property
    def horizon(self) -> int:
        return self.phases[-1].end

    def phase_of(self, transmission_index: int) -> Phase:
        if not 1 <= transmission_index <= self.horizon:
            raise ValueError(
                f"transmission index {transmission_index} outside schedule "
                f"[1, {self.horizon}]"
            )
        for p in self.phases:
            if p.start <= transmission_index <= p.end:
                return p
        raise AssertionError("contiguous phases cannot miss an index")

    def change_points(self) -> list[int]:
        """Start indices of every phase after the first."""
        return [p.start for p in self.phases[1:]]

    def availability(self, num_channels: int) -> np.ndarray:
        """Boolean [horizon, num_channels] lookup table."""
        table = np.ones((self.horizon, num_channels), dtype=bool)
        for p in self.phases:
            for ch in p.disabled:
                table[p.start - 1 : p.end, ch] = False
        return table

    def __eq__(self, other) -> bool:
        return isinstance(other, PhaseSchedule) and self.phases == other.phases

    def __repr__(self) -> str:
        return f"PhaseSchedule({list(self.phases)!r})"


@dataclass(frozen=True)
class TransmissionAttempt:
    device_id: int
    arm: ParameterSet
    start_time: float
    airtime: float
    transmission_index: int

    def __post_init__(self) -> None:
        if self.airtime <= 0:
            raise ValueError(f"airtime must be positive, got {self.airtime}")

    @property
    def end_time(self) -> float:
        return self.start_time + self.airtime


class FailureCause(enum.IntEnum):
    NONE = 0
    JAMMED = 1
    COLLISION = 2
    CARRIER_BUSY = 3


@dataclass(frozen=True)
class AckOutcome:
    success: bool
    failure_cause: FailureCause

    def __post_init__(self) -> None:
        if self.success and self.failure_cause is not FailureCause.NONE:
            raise ValueError("successful outcome cannot carry a failure cause")


def channel_available(
    schedule: PhaseSchedule, channel: Channel, transmission_index: int
) -> bool:
    """False iff the channel is disabled in the phase holding this index."""
    return channel.id not in schedule.phase_of(transmission_index).disabled


def _same_channel(a: TransmissionAttempt, b: TransmissionAttempt) -> bool:
    return a.arm.channel_id == b.arm.channel_id


def carrier_sense(attempt: TransmissionAttempt, in_flight) -> bool:
    """True (clear) iff no other station's transmission on the same channel
    covers attempt.start_time.

    Transmissions starting at exactly the same instant do not hear each
    other (both stations sampled a clear channel), which is how
    simultaneous collisions remain possible under ideal sensing.
    """
    s = attempt.start_time
    for other in in_flight:
        if other is attempt or other.device_id == attempt.device_id:
            continue
        if _same_channel(other, attempt) and other.start_time < s < other.end_time:
            return False
    return True


def resolve_outcome(
    attempt: TransmissionAttempt, schedule: PhaseSchedule, concurrent
) -> AckOutcome:
    """Outcome of a transmission that was actually sent (carrier sense
    passed upstream): disabled channel wins over collision, any airtime
    overlap on the same channel destroys the attempt."""
    phase = schedule.phase_of(attempt.transmission_index)
    if attempt.arm.channel_id in phase.disabled:
        return AckOutcome(False, FailureCause.JAMMED)
    for other in concurrent:
        if other is attempt or other.device_id == attempt.device_id:
            continue
        if (
            _same_channel(other, attempt)
            and other.start_time < attempt.end_time
            and attempt.start_time < other.end_time
        ):
            return AckOutcome(False, FailureCause.COLLISION)
    return AckOutcome(True, FailureCause.NONE)


def schedule_transmissions(
    num_devices: int, interval: float, horizon: int, rng: np.random.Generator
) -> np.ndarray:
    """Start times [num_devices, horizon]: device g transmits at
    offset_g + (n-1)*interval with offset_g ~ Uniform[0, interval)."""
    if num_devices < 1:
        raise ValueError(f"num_devices must be >= 1, got {num_devices}")
    if interval <= 0:
        raise ValueError(f"interval must be positive, got {interval}")
    offsets = rng.uniform(0.0, interval, size=num_devices)
    rounds = np.arange(horizon, dtype=np.float64) * interval
    return offsets[:, None] + rounds[None, :]


class Environment:
    """Single-replication event state shared by all devices.

    Outcomes are deferred: `submit` returns an immediate outcome only for
    a carrier-busy skip; transmitted attempts resolve when `expired` (or
    `drain`) passes their end time, so later overlaps can still destroy
    them. Callers must feed `expired` with non-decreasing timestamps and
    call it before `submit` at the same timestamp.
    """

    # active entries: [end_time, channel_id, device_id, start_time,
    #                  jammed, collided]
    _END, _CH, _DEV, _START, _JAM, _COLL = range(6)

    def __init__(
        self,
        channels: list[Channel],
        schedule: PhaseSchedule,
        start_times: np.ndarray,
        jam_rate: float = 1.0,
        jam_draws: np.ndarray | None = None,
    ):
        if len({c.center_frequency for c in channels}) != len(channels):
            raise ValueError("channel center frequencies must be unique")
        if not 0.0 <= jam_rate <= 1.0:
            raise ValueError(f"jam_rate must be in [0, 1], got {jam_rate}")
        if jam_rate < 1.0 and jam_draws is None:
            raise ValueError("jam_rate < 1 requires pre-drawn jam variates")
        self.channels = list(channels)
        self.schedule = schedule
        self.start_times = start_times
        self.jam_rate = jam_rate
        self.jam_draws = jam_draws
        self._avail = schedule.availability(len(channels))
        self._active: list[list] = []

    def submit(
        self,
        device_id: int,
        transmission_index: int,
        arm: ParameterSet,
        airtime: float,
        start_time: float,
    ) -> AckOutcome | None:
        """Register one attempt. Returns the immediate carrier-busy outcome,
        or None when the attempt went on air (outcome comes from expired)."""
        ch = arm.channel_id
        for entry in self._active:
            if entry[self._CH] == ch and entry[self._START] < start_time:
                return AckOutcome(False, FailureCause.CARRIER_BUSY)

        jammed = not self._avail[transmission_index - 1, ch]
        if jammed and self.jam_draws is not None:
            jammed = bool(
                self.jam_draws[device_id, transmission_index - 1] < self.jam_rate
            )

        end_time = start_time + airtime
        collided = False
        for entry in self._active:
            if entry[self._CH] == ch and entry[self._START] < end_time:
                entry[self._COLL] = True
                collided = True
        self._active.append([end_time, ch, device_id, start_time, jammed, collided])
        return None

    def expired(self, now: float) -> list[tuple[int, AckOutcome]]:
        """Resolve and remove attempts whose airtime ended at or before
        `now`, in end-time order."""
        if not self._active:
            return []
        due = [e for e in self._active if e[self._END] <= now]
        if not due:
            return []
        self._active = [e for e in self._active if e[self._END] > now]
        due.sort(key=lambda e: (e[self._END], e[self._START], e[self._DEV]))
        out = []
        for e in due:
            if e[self._JAM]:
                outcome = AckOutcome(False, FailureCause.JAMMED)
            elif e[self._COLL]:
                outcome = AckOutcome(False, FailureCause.COLLISION)
            else:
                outcome = AckOutcome(True, FailureCause.NONE)
            out.append((e[self._DEV], outcome))
        return out

    def drain(self) -> list[tuple[int, AckOutcome]]:
        """Resolve everything still on air (end of episode)."""
        return self.expired(math.inf)
