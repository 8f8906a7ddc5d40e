#!/usr/bin/env python3
"""Benchmark the jitted hot kernels against the pure-numpy fallback.

Runs the three hot paths (complex trigamma, cumulative Simpson prefix,
kernel-grid construction plus stroke propagation) under the current
NMOTTO_NUMBA setting, or both settings side by side with --compare
(each mode runs in a fresh subprocess because the path is chosen at
import time).

Usage:
    python3 benchmarks/bench_numba.py [--compare] [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def run_benchmarks(repeat):
    import nmotto as nm
    from nmotto.special import cumulative_simpson, trigamma_values

    results = {"numba": nm.NUMBA_ENABLED}
    rng = np.random.default_rng(1)

    z = rng.uniform(0.1, 10.0, 200_000) + 1j * rng.uniform(-20.0, 20.0, 200_000)
    trigamma_values(z[:100])  # warm-up / JIT compile
    best = min(_timed(lambda: trigamma_values(z)) for _ in range(repeat))
    results["trigamma_200k"] = best

    y = rng.standard_normal(1_000_000)
    cumulative_simpson(y[:64], 0.01)
    best = min(_timed(lambda: cumulative_simpson(y, 0.01)) for _ in range(repeat))
    results["cumulative_simpson_1m"] = best

    bath = nm.BathSpec("hot", 0.01, 0.4, 1.0)

    def grid_and_traces():
        grid = nm.build_kernel_grid(bath, 1.0, 1000.0, 0.01)
        nm.transition_traces(grid)

    grid_and_traces()
    best = min(_timed(grid_and_traces) for _ in range(repeat))
    results["grid_100k_nodes_plus_traces"] = best
    return results


def _timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--compare", action="store_true",
                        help="run both paths in subprocesses and print a table")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--emit-json", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.emit_json:
        json.dump(run_benchmarks(args.repeat), sys.stdout)
        return

    if not args.compare:
        results = run_benchmarks(args.repeat)
        print(f"numba enabled: {results.pop('numba')}")
        for name, value in results.items():
            print(f"  {name:32s} {value * 1e3:9.2f} ms")
        return

    modes = {}
    for flag in ("1", "0"):
        env = dict(os.environ, NMOTTO_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, __file__, "--emit-json", "--repeat", str(args.repeat)],
            env=env, capture_output=True, text=True, check=True)
        modes[flag] = json.loads(out.stdout)

    print(f"{'kernel':34s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name in ("trigamma_200k", "cumulative_simpson_1m", "grid_100k_nodes_plus_traces"):
        jit = modes["1"][name]
        plain = modes["0"][name]
        print(f"{name:34s} {jit * 1e3:8.2f}ms {plain * 1e3:8.2f}ms {plain / jit:7.1f}x")


if __name__ == "__main__":
    main()
