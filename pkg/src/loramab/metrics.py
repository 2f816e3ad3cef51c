"""Aggregation of per-device transmission logs into report series and CSVs.

Series conventions:
  - rolling success rate: trailing 40-transmission window (shorter at the
    start), averaged over devices and replications;
  - energy efficiency: cumulative successful bits over cumulative active
    energy, network-wide, averaged over replications;
  - selection ratios: per 40-transmission bin, share of each arm among
    all device selections in that bin, averaged over replications;
  - detection latency: transmissions from a phase change to that device's
    first reset inside the phase; device/phase pairs without a reset are
    left out, methods without any reset report NaN.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .agent import RecordLog
from .scenario import Scenario, build_arms

__all__ = ["BIN_WIDTH", "MetricsReport", "build_report", "emit_csv"]

BIN_WIDTH = 40


@dataclass
class MetricsReport:
    method: str
    horizon: int
    bin_width: int
    arm_labels: list[str]
    # replication-averaged series (what the CSVs carry)
    rolling_success: np.ndarray  # [T]
    ee_series: np.ndarray  # [T]
    bin_starts: np.ndarray  # [B], 1-based
    selection_ratios: np.ndarray  # [B, K]
    overall_success_rate: float
    overall_ee: float
    mean_detection_latency: float
    # replication-resolved aggregates for robustness checks
    success_by_rep: np.ndarray  # [R, T], device-averaged success at each index
    ee_by_rep: np.ndarray  # [R, T]
    ratios_by_rep: np.ndarray  # [R, B, K]
    latency_by_rep: np.ndarray  # [R], NaN when a replication saw no reset
    resets_by_rep: np.ndarray  # [R], total resets across devices


def _rolling_mean(series: np.ndarray, width: int) -> np.ndarray:
    cs = np.concatenate([[0.0], np.cumsum(series)])
    n = len(series)
    idx = np.arange(1, n + 1)
    lo = np.maximum(idx - width, 0)
    return (cs[idx] - cs[lo]) / (idx - lo)


def _detection_latencies(
    logs: list[RecordLog], change_points: list[int], horizon: int
) -> list[int]:
    out = []
    bounds = sorted(change_points)
    for log in logs:
        resets = np.flatnonzero(log.reset_triggered[: log.length]) + 1  # 1-based
        for i, start in enumerate(bounds):
            end = bounds[i + 1] - 1 if i + 1 < len(bounds) else horizon
            inside = resets[(resets >= start) & (resets <= end)]
            if len(inside):
                out.append(int(inside[0]) - start + 1)
    return out


def build_report(
    method: str, scenario: Scenario, logs_by_rep: list[list[RecordLog]]
) -> MetricsReport:
    """Collapse one method's replication logs into a MetricsReport."""
    horizon = scenario.horizon
    bits = float(scenario.payload_bits)
    arms = build_arms(scenario)
    k = len(arms)
    reps = len(logs_by_rep)
    if reps == 0:
        raise ValueError("need at least one replication")

    n_bins = math.ceil(horizon / BIN_WIDTH)
    bin_starts = np.arange(n_bins, dtype=np.int64) * BIN_WIDTH + 1

    success_by_rep = np.zeros((reps, horizon))
    ee_by_rep = np.zeros((reps, horizon))
    ratios_by_rep = np.zeros((reps, n_bins, k))
    latency_by_rep = np.full(reps, math.nan)
    resets_by_rep = np.zeros(reps, dtype=np.int64)
    change_points = scenario.phase_schedule().change_points()

    for r, logs in enumerate(logs_by_rep):
        if any(log.length != horizon for log in logs):
            raise ValueError("every device log must cover the full horizon")
        success = np.stack([log.success[:horizon] for log in logs])  # [G, T]
        e_active = np.stack([log.e_active[:horizon] for log in logs])
        arm_idx = np.stack([log.arm_index[:horizon] for log in logs])

        success_by_rep[r] = success.mean(axis=0)
        bits_cum = np.cumsum(success.sum(axis=0)) * bits
        energy_cum = np.cumsum(e_active.sum(axis=0))
        ee_by_rep[r] = np.divide(
            bits_cum,
            energy_cum,
            out=np.zeros(horizon),
            where=energy_cum > 0,
        )

        for b in range(n_bins):
            lo = b * BIN_WIDTH
            hi = min(lo + BIN_WIDTH, horizon)
            picks = np.bincount(arm_idx[:, lo:hi].ravel(), minlength=k)
            ratios_by_rep[r, b] = picks / picks.sum()

        latencies = _detection_latencies(logs, change_points, horizon)
        if latencies:
            latency_by_rep[r] = float(np.mean(latencies))
        resets_by_rep[r] = sum(int(log.reset_triggered.sum()) for log in logs)

    rolling = _rolling_mean(success_by_rep.mean(axis=0), BIN_WIDTH)
    all_nan = bool(np.isnan(latency_by_rep).all())
    return MetricsReport(
        method=method,
        horizon=horizon,
        bin_width=BIN_WIDTH,
        arm_labels=[a.label for a in arms],
        rolling_success=rolling,
        ee_series=ee_by_rep.mean(axis=0),
        bin_starts=bin_starts,
        selection_ratios=ratios_by_rep.mean(axis=0),
        overall_success_rate=float(success_by_rep.mean()),
        overall_ee=float(ee_by_rep[:, -1].mean()),
        mean_detection_latency=(
            math.nan if all_nan else float(np.nanmean(latency_by_rep))
        ),
        success_by_rep=success_by_rep,
        ee_by_rep=ee_by_rep,
        ratios_by_rep=ratios_by_rep,
        latency_by_rep=latency_by_rep,
        resets_by_rep=resets_by_rep,
    )


def _fmt(value: float) -> str:
    return f"{value:.10g}"


def emit_csv(reports, out_dir: str | Path) -> list[Path]:
    """Write the four metric CSVs; `reports` is one report or a sequence."""
    if isinstance(reports, MetricsReport):
        reports = [reports]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    paths = []

    path = out / "success_rate.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["transmission_index", "method", "rolling_success_rate"])
        for rep in reports:
            for n in range(rep.horizon):
                w.writerow([n + 1, rep.method, _fmt(rep.rolling_success[n])])
    paths.append(path)

    path = out / "selection_ratio.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_start", "method", "arm_label", "ratio"])
        for rep in reports:
            for b, start in enumerate(rep.bin_starts):
                for k, label in enumerate(rep.arm_labels):
                    w.writerow([int(start), rep.method, label, _fmt(rep.selection_ratios[b, k])])
    paths.append(path)

    path = out / "energy_efficiency.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["transmission_index", "method", "ee_bit_per_joule"])
        for rep in reports:
            for n in range(rep.horizon):
                w.writerow([n + 1, rep.method, _fmt(rep.ee_series[n])])
    paths.append(path)

    path = out / "summary.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "overall_success_rate", "overall_ee", "mean_detection_latency"])
        for rep in reports:
            w.writerow(
                [
                    rep.method,
                    _fmt(rep.overall_success_rate),
                    _fmt(rep.overall_ee),
                    _fmt(rep.mean_detection_latency),
                ]
            )
    paths.append(path)

    return paths
