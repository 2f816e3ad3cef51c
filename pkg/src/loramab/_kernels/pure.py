"""NumPy implementations of the hot kernels.

This backend is always importable and is the reference the compiled
extension must agree with (see tests/test_kernels.py). Select it
explicitly by setting the environment variable LORAMAB_PURE=1.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "pure"


def window_counts(bits: np.ndarray, window: int, shift: int) -> np.ndarray:
    """Per-window one-counts over a 0/1 array.

    Window d (0-based) covers bits[d*shift : d*shift + window]; only whole
    windows are produced, trailing samples that do not fill a window are
    ignored.
    """
    length = len(bits)
    if length < window:
        return np.zeros(0, dtype=np.int64)
    count = (length - window) // shift + 1
    cs = np.zeros(length + 1, dtype=np.int64)
    np.cumsum(bits, out=cs[1:])
    starts = np.arange(count, dtype=np.int64) * shift
    return cs[starts + window] - cs[starts]


def _log_binom(counts: np.ndarray, window: int) -> np.ndarray:
    # ln C(W, x) per window via a log-factorial table; exact for small W,
    # stable for large W.
    lf = np.array([math.lgamma(i + 1.0) for i in range(window + 1)])
    return lf[window] - lf[counts] - lf[window - counts]


def _seg(successes: np.ndarray, attempts: np.ndarray) -> np.ndarray:
    """-2*X*ln(X/Y) - 2*(Y-X)*ln((Y-X)/Y) with the 0*ln(0) = 0 convention."""
    x = np.asarray(successes, dtype=np.float64)
    y = np.asarray(attempts, dtype=np.float64)
    fails = y - x
    # clip the log arguments where the factor is zero; the factor kills them
    xs = np.where(x > 0.0, x, 1.0)
    fs = np.where(fails > 0.0, fails, 1.0)
    return -2.0 * x * np.log(xs / y) - 2.0 * fails * np.log(fs / y)


def sic_h0_value(counts: np.ndarray, window: int) -> float:
    """Information criterion of the constant-success-probability model."""
    d = len(counts)
    total = int(counts.sum())
    attempts = d * window
    binom = float(_log_binom(counts, window).sum())
    return math.log(d) - 2.0 * binom + float(_seg(total, attempts))


def sic_h1_value(counts: np.ndarray, window: int, split: int) -> float:
    """Information criterion of the single-change model with the change
    placed after window `split` (1-based, 1 <= split <= D-1)."""
    d = len(counts)
    if not 1 <= split <= d - 1:
        raise ValueError(f"split must be in [1, {d - 1}], got {split}")
    total = int(counts.sum())
    attempts = d * window
    binom = float(_log_binom(counts, window).sum())
    left = int(counts[:split].sum())
    left_n = split * window
    return (
        2.0 * math.log(d)
        - 2.0 * binom
        + float(_seg(left, left_n))
        + float(_seg(total - left, attempts - left_n))
    )


def sic_scan(counts: np.ndarray, window: int) -> tuple[float, float, int]:
    """Evaluate the no-change criterion and the best single-change split.

    Returns (h0, min over splits of h1, 1-based argmin split). Requires
    D >= 2; ties resolve to the smallest split.
    """
    d = len(counts)
    total = int(counts.sum())
    attempts = d * window
    binom = float(_log_binom(counts, window).sum())
    h0 = math.log(d) - 2.0 * binom + float(_seg(total, attempts))

    left = np.cumsum(counts[:-1])
    left_n = np.arange(1, d, dtype=np.int64) * window
    h1 = (
        2.0 * math.log(d)
        - 2.0 * binom
        + _seg(left, left_n)
        + _seg(total - left, attempts - left_n)
    )
    best = int(np.argmin(h1))
    return h0, float(h1[best]), best + 1


def ucb_select(
    means: np.ndarray,
    m2: np.ndarray,
    counts: np.ndarray,
    total: int,
    padded: bool,
    scores: np.ndarray,
) -> int:
    """Fill `scores` with UCB1-tuned scores and return the argmax index.

    Unplayed arms score +inf; ties resolve to the lowest index. `padded`
    adds the sqrt(2 ln t / N) exploration term inside the variance clamp.
    """
    log_t = math.log(max(total, 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        variance = m2 / counts
        if padded:
            variance = variance + np.sqrt(2.0 * log_t / counts)
        bonus = np.sqrt((log_t / counts) * np.minimum(0.25, variance))
        np.add(means, bonus, out=scores)
    scores[counts == 0] = np.inf
    return int(np.argmax(scores))
