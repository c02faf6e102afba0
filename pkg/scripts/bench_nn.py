#!/usr/bin/env python3
"""Benchmark the two nearest-neighbor branch engines against each other.

Runs complete_from_start over random Manhattan distance matrices for a grid
of (cities, branch cap) settings and reports the median wall time per lane.
The numba lane is warmed once before timing so jit compilation is not billed
to the first measurement.

Usage: python3 scripts/bench_nn.py [--sizes 16,32,64,128] [--caps 16,256,4096]
       [--repeat 5] [--seed 0]
"""
import argparse
import statistics
import time

import numpy as np

from multisweep._kernels import HAS_NUMBA, nn_numpy

if HAS_NUMBA:
    from multisweep._kernels import nn_numba


def make_instance(rng, n):
    xs = rng.integers(0, 3 * n, n)
    ys = rng.integers(0, 3 * n, n)
    return np.abs(xs[:, None] - xs[None, :]) + np.abs(ys[:, None] - ys[None, :])


def time_lane(fn, D, cap, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        for start in range(min(8, D.shape[0])):
            fn(D, start, cap)
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="16,32,64,128")
    ap.add_argument("--caps", default="16,256,4096")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    caps = [int(c) for c in args.caps.split(",")]
    rng = np.random.default_rng(args.seed)

    if not HAS_NUMBA:
        print("numba unavailable; only the numpy lane can be timed")

    warm = make_instance(rng, 8)
    nn_numpy.complete_from_start(warm, 0, 64)
    if HAS_NUMBA:
        nn_numba.complete_from_start(warm, 0, 64)

    header = f"{'cities':>7} {'cap':>6} {'numpy ms':>10}"
    if HAS_NUMBA:
        header += f" {'numba ms':>10} {'speedup':>8}"
    print(header)
    for n in sizes:
        D = make_instance(rng, n)
        for cap in caps:
            t_np = time_lane(nn_numpy.complete_from_start, D, cap, args.repeat)
            row = f"{n:>7} {cap:>6} {t_np * 1e3:>10.2f}"
            if HAS_NUMBA:
                t_nb = time_lane(nn_numba.complete_from_start, D, cap, args.repeat)
                row += f" {t_nb * 1e3:>10.2f} {t_np / t_nb:>7.1f}x"
                d_np, o_np, f_np = nn_numpy.complete_from_start(D, 0, cap)
                d_nb, o_nb, f_nb = nn_numba.complete_from_start(D, 0, cap)
                assert np.array_equal(d_np, d_nb) and np.array_equal(o_np, o_nb) and f_np == f_nb
            print(row)


if __name__ == "__main__":
    main()
