#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot loops (candidate-window distance scans, DTW, DCT) on a
few problem sizes, with a warmup pass so JIT compilation is not billed to
numba. Results print as a table with the speedup of numba over numpy.

Usage:
  python3 benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from tsadvkit.kernels import numba_backend, numpy_backend

BACKENDS = {"numpy": numpy_backend, "numba": numba_backend}


def best_of(repeats, fn, *args):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_subdist_batch(backend, rng, n_series, length, window):
    candidates = rng.standard_normal((n_series * (length - window + 1) // 4, window))
    X = rng.standard_normal((n_series, length))
    return lambda: backend.subdist_batch(candidates, X)


def bench_dtw(backend, rng, length):
    a = rng.standard_normal(length)
    b = rng.standard_normal(length)
    return lambda: backend.dtw_sq_cost(a, b)


def bench_dct(backend, rng, length):
    ps = rng.standard_normal((20, length))

    def run():
        for p in ps:
            backend.dct_inverse(backend.dct_forward(p))

    return run


CASES = [
    ("subdist_batch n=40 T=128 l=64", bench_subdist_batch, (40, 128, 64)),
    ("subdist_batch n=64 T=160 l=80", bench_subdist_batch, (64, 160, 80)),
    ("dtw T=200", bench_dtw, (200,)),
    ("dtw T=500", bench_dtw, (500,)),
    ("dct 20x T=256", bench_dct, (256,)),
    ("dct 20x T=1024", bench_dct, (1024,)),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"{'case':34s} {'numpy':>10s} {'numba':>10s} {'speedup':>9s}")
    print("-" * 66)
    for name, setup, params in CASES:
        times = {}
        for backend_name, backend in BACKENDS.items():
            rng = np.random.default_rng(0)
            run = setup(backend, rng, *params)
            run()  # warmup (JIT compile + caches)
            times[backend_name] = best_of(args.repeats, run)
        speedup = times["numpy"] / times["numba"]
        print(
            f"{name:34s} {times['numpy']*1e3:9.2f}ms {times['numba']*1e3:9.2f}ms "
            f"{speedup:8.1f}x"
        )


if __name__ == "__main__":
    main()
