"""Seeded replication driver.

Replication r of a scenario derives its RNG stream from
SeedSequence(base_seed).spawn(replications)[r]; the stream feeds only the
environment (device offsets, optional jam draws), so the proposed and
baseline methods see identical event schedules for the same replication
and differ purely in policy. Results merge by replication index, never by
completion order, so worker-pool runs match serial runs byte for byte.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .agent import Agent, RecordLog, run_episode
from .bandit import BanditState
from .change_detect import AckHistory
from .environment import Environment, schedule_transmissions
from .metrics import MetricsReport, build_report
from .scenario import METHODS, Scenario, arm_costs, build_arms

__all__ = ["run_replication", "run", "run_methods"]


def run_replication(scenario: Scenario, method: str, rep_index: int) -> list[RecordLog]:
    """Execute one seeded episode and return every device's log."""
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    seed = np.random.SeedSequence(scenario.base_seed).spawn(scenario.replications)[
        rep_index
    ]
    rng = np.random.default_rng(seed)
    start_times = schedule_transmissions(
        scenario.num_devices, scenario.transmission_interval, scenario.horizon, rng
    )
    jam_draws = None
    if scenario.jam_rate < 1.0:
        jam_draws = rng.random((scenario.num_devices, scenario.horizon))

    arms = build_arms(scenario)
    costs = arm_costs(scenario, arms)
    profile = scenario.energy_profile()
    env = Environment(
        list(scenario.channels),
        scenario.phase_schedule(),
        start_times,
        jam_rate=scenario.jam_rate,
        jam_draws=jam_draws,
    )
    agents = [
        Agent(
            device_id=g,
            bandit=BanditState(arms, variance_padding=scenario.variance_padding),
            history=AckHistory(
                scenario.window_length, scenario.shift_step, capacity=scenario.horizon
            ),
            costs=costs,
            profile=profile,
            payload_bits=scenario.payload_bits,
            sic_enabled=(method == "proposed"),
            theta=scenario.theta,
            horizon=scenario.horizon,
        )
        for g in range(scenario.num_devices)
    ]
    return run_episode(agents, env, scenario.horizon)


def _worker(args: tuple) -> tuple[str, int, list[RecordLog]]:
    scenario, method, rep = args
    return method, rep, run_replication(scenario, method, rep)


def run(scenario: Scenario, method: str, workers: int = 1) -> MetricsReport:
    """Run every replication of one method and aggregate."""
    return run_methods(scenario, [method], workers)[method]


def run_methods(
    scenario: Scenario, methods, workers: int = 1
) -> dict[str, MetricsReport]:
    """Run each method over all replications; deterministic for a fixed
    scenario regardless of `workers`."""
    methods = list(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {m!r}")
    jobs = [(scenario, m, r) for m in methods for r in range(scenario.replications)]
    logs: dict[str, list[list[RecordLog] | None]] = {
        m: [None] * scenario.replications for m in methods
    }
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for method, rep, result in pool.map(_worker, jobs):
                logs[method][rep] = result
    else:
        for job in jobs:
            method, rep, result = _worker(job)
            logs[method][rep] = result
    return {m: build_report(m, scenario, logs[m]) for m in methods}
