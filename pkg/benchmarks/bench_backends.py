#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the same advection workloads through both kernel modules directly
(no env juggling needed) and reports wall times plus the speedup. Use
--full for acceptance-sized grids.
"""

import argparse
import time

import numpy as np

from luq._kernels_np import (
    advect_duffing as np_duffing,
    advect_saddle as np_saddle,
    iterate_saddle_map as np_map,
)
from luq._steps import build_time_grid, sin_tables

try:
    from luq._kernels_nb import (
        advect_duffing as nb_duffing,
        advect_saddle as nb_saddle,
        iterate_saddle_map as nb_map,
    )

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def time_rows(fn, args_per_row, repeats=1):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for args in args_per_row:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--full", action="store_true",
                        help="acceptance-sized grids (201 rows x 5000 steps)")
    args = parser.parse_args()

    n_rows = 201 if args.full else 21
    nx = 201 if args.full else 101
    h = 2e-3 if args.full else 2e-2
    ts = build_time_grid(0.0, 10.0, h)
    sin_t, sin_mid = sin_tables(ts)
    rng = np.random.default_rng(0)
    rows = [(rng.uniform(-1, 1, nx), rng.uniform(-1, 1, nx)) for _ in range(n_rows)]

    cases = [
        ("saddle advection", [(1.0, x, y, ts) for x, y in rows], np_saddle, nb_saddle if HAS_NUMBA else None),
        ("duffing advection", [(0.1, x, y, ts, sin_t, sin_mid) for x, y in rows], np_duffing, nb_duffing if HAS_NUMBA else None),
        ("saddle map n=10", [(2.0, x, y, 10) for x, y in rows], np_map, nb_map if HAS_NUMBA else None),
    ]

    print(f"{n_rows} rows x {nx} nodes, {len(ts) - 1} steps\n")
    print(f"{'kernel':<20} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name, per_row, np_fn, nb_fn in cases:
        t_np = time_rows(np_fn, per_row)
        if nb_fn is None:
            print(f"{name:<20} {t_np:>9.3f}s {'n/a':>10} {'n/a':>9}")
            continue
        nb_fn(*per_row[0])  # compile outside the timed region
        t_nb = time_rows(nb_fn, per_row)
        print(f"{name:<20} {t_np:>9.3f}s {t_nb:>9.3f}s {t_np / t_nb:>8.1f}x")
    if not HAS_NUMBA:
        print("\nnumba not importable; only the fallback was timed")


if __name__ == "__main__":
    main()
