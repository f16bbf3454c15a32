"""Gradient-descent inner loop for the level classifier.

The epoch loop is the package's one hot numeric kernel; it is JIT-compiled
with numba when available. Set SENTPICK_NO_NUMBA=1 to force the pure-numpy
path (same function, uncompiled — results are identical up to float
rounding). benchmarks/bench_train.py compares the two.
"""
from __future__ import annotations

import os

import numpy as np


def gd_epochs(x: np.ndarray, onehot: np.ndarray, lr: float, l2: float,
              epochs: int) -> tuple[np.ndarray, np.ndarray]:
    """Full-batch softmax regression from zero-initialized weights.

    Minimizes mean cross-entropy plus (l2/2)*||W||^2 (bias unpenalized)
    over `epochs` fixed steps of plain gradient descent. x is (n, d)
    float64, onehot (n, k) float64; returns (weights (k, d), bias (k,)).
    """
    n, d = x.shape
    k = onehot.shape[1]
    w = np.zeros((k, d))
    b = np.zeros(k)
    for _ in range(epochs):
        probs = np.dot(x, w.T)
        for i in range(n):
            row = probs[i] + b
            e = np.exp(row - row.max())
            probs[i] = e / e.sum()
        diff = probs - onehot
        gw = np.dot(diff.T, x) / n + l2 * w
        gb = np.sum(diff, axis=0) / n
        w -= lr * gw
        b -= lr * gb
    return w, b


def _want_numba() -> bool:
    return os.environ.get("SENTPICK_NO_NUMBA", "").strip() not in ("1", "true", "yes")


if _want_numba():
    try:
        from numba import njit
        gd_epochs_fast = njit(cache=True)(gd_epochs)
        KERNEL_BACKEND = "numba"
    except ImportError:
        gd_epochs_fast = gd_epochs
        KERNEL_BACKEND = "numpy"
else:
    gd_epochs_fast = gd_epochs
    KERNEL_BACKEND = "numpy"
