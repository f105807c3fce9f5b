"""Log-domain building blocks.

Sums of products like sum_x nu(x)^a theta(x)^(1-a) and entries of high matrix
powers overflow or underflow quickly, so every reduction in this library runs
in log space.  The convention throughout: ``-inf`` is the logarithm of zero.
Such entries drop out of log-sum-exp reductions and never turn into NaN.
"""

from __future__ import annotations

import math

import numpy as np


def safe_log(x: np.ndarray | float) -> np.ndarray:
    """Elementwise natural log with log(0) = -inf and no warnings.

    Negative inputs are a caller bug; they are rejected loudly rather than
    silently masked.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ValueError("safe_log expects nonnegative input")
    out = np.full(arr.shape, -np.inf)
    np.log(arr, out=out, where=arr > 0)
    return out


def logsumexp(a: np.ndarray | list, axis: int | None = None):
    """Stable log(sum(exp(a))) that tolerates -inf entries and empty input.

    With ``axis=None`` returns a float; otherwise an array with that axis
    reduced.  An all ``-inf`` (or empty) reduction yields ``-inf``, matching
    log of an empty sum.
    """
    a = np.asarray(a, dtype=float)
    if axis is None:
        if a.size == 0:
            return -math.inf
        m = float(np.max(a))
        if m == -math.inf:
            return -math.inf
        return m + math.log(float(np.sum(np.exp(a - m))))
    m = np.max(a, axis=axis, keepdims=True)
    # Replace -inf pivots by 0 so the subtraction below never forms inf-inf.
    pivot = np.where(np.isneginf(m), 0.0, m)
    s = np.sum(np.exp(a - pivot), axis=axis)
    out = np.full(s.shape, -np.inf)
    np.log(s, out=out, where=s > 0)
    return np.squeeze(pivot, axis=axis) + out


def log_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product in log space: out[i, j] = LSE_k (a[i, k] + b[k, j])."""
    return logsumexp(a[:, :, None] + b[None, :, :], axis=1)


def log_vecmat(v: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Row-vector times matrix in log space: out[j] = LSE_i (v[i] + m[i, j])."""
    return logsumexp(v[:, None] + m, axis=0)


def log_matrix_power(log_m: np.ndarray, n: int) -> np.ndarray:
    """Log-domain n-th matrix power by binary exponentiation (n >= 1)."""
    if n < 1:
        raise ValueError("matrix power needs n >= 1")
    result: np.ndarray | None = None
    base = np.asarray(log_m, dtype=float)
    while True:
        if n & 1:
            result = base if result is None else log_matmul(result, base)
        n >>= 1
        if n == 0:
            break
        base = log_matmul(base, base)
    assert result is not None
    return result
