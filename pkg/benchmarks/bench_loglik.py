#!/usr/bin/env python3
"""Benchmark the log-likelihood scan kernel: numba backend vs numpy fallback.

The scan is the package's hot loop: every MLE fit evaluates the shot-record
log-likelihood across a grid of candidate phases. Run as

    python benchmarks/bench_loglik.py [--shots N] [--scan-points M]
"""

import argparse
import math
import time

import numpy as np

from weakmeas import _kernels


def make_inputs(n_shots: int, seed: int = 0):
    rng = np.random.Generator(np.random.PCG64(seed))
    p = rng.normal(size=n_shots)
    signs = np.where(rng.random(n_shots) < 0.5, -1, 1)
    h = 1e-4 * p + 0.25 * math.pi
    plus = signs > 0
    ch, sh = np.cos(h), np.sin(h)
    return ch[plus], sh[plus], ch[~plus], sh[~plus]


def time_backend(fn, args, thetas, repeats: int = 3) -> float:
    fn(*args, thetas[:2])  # warmup (and JIT compile for the numba path)
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args, thetas)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shots", type=int, default=1_000_000)
    parser.add_argument("--scan-points", type=int, default=101)
    cli = parser.parse_args()

    args = make_inputs(cli.shots)
    thetas = np.linspace(-0.25 * math.pi, 0.25 * math.pi, cli.scan_points)

    t_numpy = time_backend(_kernels.loglik_scan_numpy, args, thetas)
    print(f"shots={cli.shots}  scan points={cli.scan_points}")
    print(f"numpy : {t_numpy:8.3f} s  ({t_numpy / cli.scan_points * 1e3:7.2f} ms/point)")

    if _kernels.loglik_scan_numba is None:
        print("numba : unavailable (not installed or WEAKMEAS_NO_NUMBA set)")
        return

    t_numba = time_backend(_kernels.loglik_scan_numba, args, thetas)
    print(f"numba : {t_numba:8.3f} s  ({t_numba / cli.scan_points * 1e3:7.2f} ms/point)")
    print(f"speedup: {t_numpy / t_numba:.1f}x")

    val_np, _ = _kernels.loglik_scan_numpy(*args, thetas[:5])
    val_nb, _ = _kernels.loglik_scan_numba(*args, thetas[:5])
    print(f"max relative disagreement: {np.max(np.abs(val_np - val_nb) / np.abs(val_np)):.2e}")


if __name__ == "__main__":
    main()
