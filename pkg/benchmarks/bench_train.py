"""Benchmark the classifier training kernel: numba JIT vs the pure-numpy
fallback (the same function, uncompiled).

    python benchmarks/bench_train.py [n_rows] [epochs]

The first numba call includes JIT compilation and is reported separately.
"""
import sys
import time

import numpy as np

from sentpick._kernels import gd_epochs

try:
    from numba import njit
    gd_epochs_jit = njit(cache=True)(gd_epochs)
except ImportError:
    gd_epochs_jit = None

N_FEATURES = 61
N_CLASSES = 5
REPEATS = 5


def make_data(rng, n_rows):
    x = rng.normal(size=(n_rows, N_FEATURES))
    y = rng.integers(0, N_CLASSES, n_rows)
    onehot = np.zeros((n_rows, N_CLASSES))
    onehot[np.arange(n_rows), y] = 1.0
    return np.ascontiguousarray(x), onehot


def bench(func, x, onehot, epochs):
    times = []
    for _ in range(REPEATS):
        start = time.perf_counter()
        func(x, onehot, 0.1, 1e-4, epochs)
        times.append(time.perf_counter() - start)
    return min(times), sum(times) / len(times)


def main():
    n_rows = int(sys.argv[1]) if len(sys.argv) > 1 else 500
    epochs = int(sys.argv[2]) if len(sys.argv) > 2 else 500
    rng = np.random.default_rng(0)
    x, onehot = make_data(rng, n_rows)
    print(f"rows={n_rows} features={N_FEATURES} classes={N_CLASSES} epochs={epochs}")

    best_np, avg_np = bench(gd_epochs, x, onehot, epochs)
    print(f"numpy fallback : best {best_np * 1000:8.1f} ms   avg {avg_np * 1000:8.1f} ms")

    if gd_epochs_jit is None:
        print("numba          : not installed")
        return
    start = time.perf_counter()
    gd_epochs_jit(x, onehot, 0.1, 1e-4, 1)
    compile_time = time.perf_counter() - start
    best_nb, avg_nb = bench(gd_epochs_jit, x, onehot, epochs)
    print(f"numba @njit    : best {best_nb * 1000:8.1f} ms   avg {avg_nb * 1000:8.1f} ms"
          f"   (first call incl. JIT: {compile_time * 1000:.0f} ms)")
    print(f"speedup        : {best_np / best_nb:.1f}x")

    w_np, b_np = gd_epochs(x, onehot, 0.1, 1e-4, 50)
    w_nb, b_nb = gd_epochs_jit(x, onehot, 0.1, 1e-4, 50)
    drift = max(np.abs(w_np - w_nb).max(), np.abs(b_np - b_nb).max())
    print(f"max |Δparam|   : {drift:.2e} (50 epochs, both backends)")


if __name__ == "__main__":
    main()
