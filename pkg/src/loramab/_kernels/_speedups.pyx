# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in pure.py.

Same contracts, same tie-breaking, same logarithm conventions; the test
suite checks numerical agreement between the two backends.
"""

from libc.math cimport INFINITY, lgamma, log, sqrt

import numpy as np

BACKEND = "compiled"


cdef inline double _ln_comb(double n, double k) noexcept nogil:
    return lgamma(n + 1.0) - lgamma(k + 1.0) - lgamma(n - k + 1.0)


cdef inline double _seg(double successes, double attempts) noexcept nogil:
    # -2*X*ln(X/Y) - 2*(Y-X)*ln((Y-X)/Y), dropping terms with zero factor
    cdef double fails = attempts - successes
    cdef double out = 0.0
    if successes > 0.0:
        out -= 2.0 * successes * log(successes / attempts)
    if fails > 0.0:
        out -= 2.0 * fails * log(fails / attempts)
    return out


def window_counts(const unsigned char[::1] bits, Py_ssize_t window, Py_ssize_t shift):
    cdef Py_ssize_t length = bits.shape[0]
    cdef Py_ssize_t count = 0
    if length >= window:
        count = (length - window) // shift + 1
    out = np.empty(count, dtype=np.int64)
    cdef long long[::1] ov = out
    cdef Py_ssize_t d, i, start
    cdef long long acc
    for d in range(count):
        start = d * shift
        acc = 0
        for i in range(start, start + window):
            acc += bits[i]
        ov[d] = acc
    return out


cdef double _binom_sum(const long long[::1] counts, double window) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t i
    for i in range(counts.shape[0]):
        acc += _ln_comb(window, <double>counts[i])
    return acc


def sic_h0_value(const long long[::1] counts, Py_ssize_t window):
    cdef Py_ssize_t d = counts.shape[0]
    cdef double total = 0.0
    cdef Py_ssize_t i
    for i in range(d):
        total += counts[i]
    return (
        log(<double>d)
        - 2.0 * _binom_sum(counts, <double>window)
        + _seg(total, <double>(d * window))
    )


def sic_h1_value(const long long[::1] counts, Py_ssize_t window, Py_ssize_t split):
    cdef Py_ssize_t d = counts.shape[0]
    if split < 1 or split > d - 1:
        raise ValueError(f"split must be in [1, {d - 1}], got {split}")
    cdef double total = 0.0, left = 0.0
    cdef Py_ssize_t i
    for i in range(d):
        total += counts[i]
        if i < split:
            left += counts[i]
    cdef double left_n = <double>(split * window)
    cdef double attempts = <double>(d * window)
    return (
        2.0 * log(<double>d)
        - 2.0 * _binom_sum(counts, <double>window)
        + _seg(left, left_n)
        + _seg(total - left, attempts - left_n)
    )


def sic_scan(const long long[::1] counts, Py_ssize_t window):
    cdef Py_ssize_t d = counts.shape[0]
    cdef double w = <double>window
    cdef double total = 0.0
    cdef Py_ssize_t i
    for i in range(d):
        total += counts[i]
    cdef double attempts = <double>d * w
    cdef double binom = _binom_sum(counts, w)
    cdef double h0 = log(<double>d) - 2.0 * binom + _seg(total, attempts)

    cdef double base = 2.0 * log(<double>d) - 2.0 * binom
    cdef double best = INFINITY
    cdef Py_ssize_t best_split = 1
    cdef double left = 0.0, h1
    for i in range(1, d):
        left += counts[i - 1]
        h1 = base + _seg(left, i * w) + _seg(total - left, attempts - i * w)
        if h1 < best:
            best = h1
            best_split = i
    return h0, best, best_split


def ucb_select(
    const double[::1] means,
    const double[::1] m2,
    const long long[::1] counts,
    long long total,
    bint padded,
    double[::1] scores,
):
    cdef Py_ssize_t k = means.shape[0]
    cdef double log_t = log(<double>(total if total > 1 else 1))
    cdef double variance, bonus, s
    cdef double best = -INFINITY
    cdef Py_ssize_t i, best_i = 0
    for i in range(k):
        if counts[i] == 0:
            s = INFINITY
        else:
            variance = m2[i] / counts[i]
            if padded:
                variance += sqrt(2.0 * log_t / counts[i])
            if variance > 0.25:
                variance = 0.25
            bonus = sqrt((log_t / counts[i]) * variance)
            s = means[i] + bonus
        scores[i] = s
        if s > best:
            best = s
            best_i = i
    return best_i
