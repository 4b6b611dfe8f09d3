#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-NumPy fallback.

Both backends integrate the same trajectories (identical random streams),
so besides timing, the script cross-checks that the resulting ensemble
populations agree.

Usage:
    python benchmarks/compare_backends.py [--traj 2000] [--t-final 5.0]
                                          [--n-wells 3] [--gamma 1.5]
"""

import argparse
import time

import numpy as np

from wignerchain import config_from_dict, validate_config
from wignerchain.backends import available_backends
from wignerchain.observables import populations
from wignerchain.pipeline import run_simulation


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--traj", type=int, default=2000)
    parser.add_argument("--t-final", type=float, default=5.0)
    parser.add_argument("--n-wells", type=int, default=3)
    parser.add_argument("--gamma", type=float, default=1.5)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    cfg = validate_config(
        config_from_dict(
            {
                "n_wells": args.n_wells,
                "initial_state": "fock",
                "gamma": args.gamma,
                "n_traj": args.traj,
                "seed": 20240915,
                "t_final": args.t_final,
            }
        )
    )
    steps = args.traj * cfg.n_steps

    results = {}
    print(f"{args.traj} trajectories x {cfg.n_steps} steps, "
          f"{args.n_wells} wells, workers={args.workers}\n")
    print(f"{'backend':<10} {'wall [s]':>9} {'traj/s':>9} {'Msteps/s':>9}")
    for name in sorted(available_backends()):
        t0 = time.perf_counter()
        res = run_simulation(cfg, workers=args.workers, backend=name)
        wall = time.perf_counter() - t0
        results[name] = res
        print(f"{name:<10} {wall:>9.2f} {args.traj / wall:>9.0f} "
              f"{steps / wall / 1e6:>9.2f}")

    if len(results) == 2:
        pops = {
            name: populations(res.accumulators[-1]) for name, res in results.items()
        }
        diff = np.abs(pops["cython"] - pops["python"]).max()
        print(f"\nmax final-population difference between backends: {diff:.3e}")
        speedup = (
            results["python"].wall_time / results["cython"].wall_time
        )
        print(f"compiled-kernel speedup: {speedup:.1f}x")
    else:
        print("\ncompiled kernel not available; only the fallback was timed")


if __name__ == "__main__":
    main()
