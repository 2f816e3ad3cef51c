"""Compare the compiled kernel backend against the NumPy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Times the three hot kernels at the sizes the simulator actually hits
(25 arms, 10-sample windows over a few hundred ACKs) plus a larger
stress size, and prints per-call latency for both backends.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from loramab._kernels import pure

try:
    from loramab._kernels import _speedups
except ImportError:
    _speedups = None


def bench(fn, number: int, repeat: int) -> float:
    """Best-of-repeat seconds per call."""
    times = timeit.repeat(fn, number=number, repeat=repeat)
    return min(times) / number


def make_cases(rng: np.random.Generator):
    cases = []

    bits_small = rng.integers(0, 2, size=200).astype(np.uint8)
    bits_large = rng.integers(0, 2, size=20_000).astype(np.uint8)
    cases.append(("window_counts l=200 W=10 F=5", "window_counts", (bits_small, 10, 5), 2000))
    cases.append(("window_counts l=20000 W=10 F=5", "window_counts", (bits_large, 10, 5), 200))

    counts_small = rng.integers(0, 11, size=39).astype(np.int64)
    counts_large = rng.integers(0, 11, size=4000).astype(np.int64)
    cases.append(("sic_scan D=39 W=10", "sic_scan", (counts_small, 10), 2000))
    cases.append(("sic_scan D=4000 W=10", "sic_scan", (counts_large, 10), 20))

    k = 25
    counts = rng.integers(1, 50, size=k)
    means = rng.random(k)
    m2 = rng.random(k) * counts
    total = int(counts.sum())
    cases.append(
        ("ucb_select K=25", "ucb_select", (means, m2, counts, total, False), 5000)
    )
    k = 500
    counts = rng.integers(1, 50, size=k)
    cases.append(
        (
            "ucb_select K=500",
            "ucb_select",
            (rng.random(k), rng.random(k) * counts, counts, int(counts.sum()), False),
            2000,
        )
    )
    return cases


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="timing repeats (default 5)")
    args = parser.parse_args()

    if _speedups is None:
        print("compiled extension not built; benchmarking the NumPy backend alone")

    rng = np.random.default_rng(2024)
    cases = make_cases(rng)

    header = f"{'case':32} {'pure':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, kernel, case_args, number in cases:
        def run(impl, kernel=kernel, case_args=case_args):
            fn = getattr(impl, kernel)
            if kernel == "ucb_select":
                scores = np.zeros(len(case_args[0]))
                return lambda: fn(*case_args, scores)
            return lambda: fn(*case_args)

        t_pure = bench(run(pure), number, args.repeat)
        if _speedups is not None:
            t_fast = bench(run(_speedups), number, args.repeat)
            print(
                f"{name:32} {t_pure * 1e6:9.2f} us {t_fast * 1e6:9.2f} us "
                f"{t_pure / t_fast:8.1f}x"
            )
        else:
            print(f"{name:32} {t_pure * 1e6:9.2f} us {'-':>12} {'-':>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
