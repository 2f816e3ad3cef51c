"""Change detection over a device's ACK history.

The ACK sequence is cut into sliding windows of length W shifted by F.
Two models of the per-window success counts are scored with an
information criterion: a single success probability for the whole
sequence, versus one change of probability at some window boundary. A
change is declared when the no-change score exceeds the best
single-change score by more than a threshold.

All logarithms are natural, so thresholds are expressed in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = [
    "InsufficientHistory",
    "AckHistory",
    "WindowStats",
    "SicResult",
    "windowize",
    "sic_h0",
    "sic_h1",
    "detect",
    "detect_bits",
]


class InsufficientHistory(ValueError):
    """Raised when the sequence is shorter than one window."""


class AckHistory:
    """Growable 0/1 ACK sequence with fixed windowing parameters."""

    __slots__ = ("window_length", "shift_step", "_buf", "_len")

    def __init__(self, window_length: int = 10, shift_step: int = 5, capacity: int = 1024):
        if window_length < 1:
            raise ValueError(f"window_length must be >= 1, got {window_length}")
        if not 1 <= shift_step <= window_length:
            raise ValueError(
                f"shift_step must be in [1, window_length], got {shift_step}"
            )
        self.window_length = window_length
        self.shift_step = shift_step
        self._buf = np.zeros(max(capacity, window_length), dtype=np.uint8)
        self._len = 0

    def __len__(self) -> int:
        return self._len

    @property
    def bits(self) -> np.ndarray:
        """Read-only view of the sequence observed so far."""
        view = self._buf[: self._len]
        view.flags.writeable = False
        return view

    def append(self, bit: int) -> None:
        if bit not in (0, 1):
            raise ValueError(f"ACK bit must be 0 or 1, got {bit}")
        if self._len == len(self._buf):
            grown = np.zeros(2 * len(self._buf), dtype=np.uint8)
            grown[: self._len] = self._buf
            self._buf = grown
        self._buf[self._len] = bit
        self._len += 1

    def clear(self) -> None:
        self._len = 0

    @classmethod
    def from_bits(cls, bits, window_length: int = 10, shift_step: int = 5) -> "AckHistory":
        h = cls(window_length, shift_step, capacity=max(len(bits), 1))
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("bits must contain only 0 and 1")
        h._buf[: len(arr)] = arr
        h._len = len(arr)
        return h


@dataclass(frozen=True)
class WindowStats:
    """Per-window success counts and their totals."""

    successes: np.ndarray  # x_d, one entry per whole window
    window_count: int  # D
    window_length: int  # W
    total_successes: int  # X
    total_attempts: int  # Y = D * W


@dataclass(frozen=True)
class SicResult:
    sic_h0: float
    sic_h1_min: float
    best_split: int
    statistic: float
    detected: bool


def windowize(history: AckHistory) -> WindowStats:
    """Cut the sequence into whole windows; window d (1-based) covers
    positions [(d-1)*F + 1, (d-1)*F + W]. Trailing samples that do not
    fill a window stay in the history but are excluded here."""
    length = len(history)
    w = history.window_length
    if length < w:
        raise InsufficientHistory(
            f"need at least {w} samples for one window, have {length}"
        )
    counts = _kernels.window_counts(history.bits, w, history.shift_step)
    d = len(counts)
    total = int(counts.sum())
    return WindowStats(
        successes=counts,
        window_count=d,
        window_length=w,
        total_successes=total,
        total_attempts=d * w,
    )


def sic_h0(stats: WindowStats) -> float:
    """Criterion value for the constant-probability model."""
    return float(_kernels.sic_h0_value(stats.successes, stats.window_length))


def sic_h1(stats: WindowStats, j: int) -> float:
    """Criterion value for a single probability change after window j."""
    return float(_kernels.sic_h1_value(stats.successes, stats.window_length, j))


def detect(history: AckHistory, theta: float) -> SicResult:
    """Test the history for a change point.

    Returns a non-detection with NaN scores when fewer than two whole
    windows are available (no split to test).
    """
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")
    w = history.window_length
    if len(history) < w:
        return SicResult(math.nan, math.nan, 0, math.nan, False)
    counts = _kernels.window_counts(history.bits, w, history.shift_step)
    if len(counts) < 2:
        h0 = float(_kernels.sic_h0_value(counts, w)) if len(counts) else math.nan
        return SicResult(h0, math.nan, 0, math.nan, False)
    h0, h1_min, best_split = _kernels.sic_scan(counts, w)
    statistic = h0 - h1_min
    return SicResult(
        sic_h0=float(h0),
        sic_h1_min=float(h1_min),
        best_split=int(best_split),
        statistic=float(statistic),
        detected=bool(statistic > theta),
    )


def detect_bits(bits, window_length: int, shift_step: int, theta: float) -> SicResult:
    """Convenience wrapper over `detect` for a raw bit sequence."""
    return detect(AckHistory.from_bits(bits, window_length, shift_step), theta)
