#!/usr/bin/env python3
"""Side-by-side timing of the compiled kernels and the pure-python fallback.

Each mode runs in its own subprocess so the import-time kernel selection is
honest (ORDERLEVEL_NO_NUMBA=1 forces the fallback).  Workloads are warmed
once, then the best of three runs is reported.

Usage: python3 benchmarks/bench_kernels.py [--json]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def workloads():
    from orderlevel import (
        antichain,
        check_level,
        check_level_bruteforce,
        check_level_subsets,
        from_covers,
        order_polytope_as_alcoved,
    )

    fink = from_covers(
        [str(i) for i in range(1, 12)],
        [
            ("1", "2"), ("2", "3"), ("3", "4"),
            ("5", "6"), ("6", "7"),
            ("8", "9"), ("9", "10"), ("10", "11"),
            ("5", "3"), ("9", "7"),
        ],
    )
    return {
        "check all methods (11-element example)": lambda: check_level(
            fink, methods=("subsets", "condition_n", "brute_force")
        ),
        "subset scan (4096 digraphs)": lambda: check_level_subsets(fink),
        "brute-force oracle (antichain of 6)": lambda: check_level_bruteforce(
            antichain(6)
        ),
        "alcoved enumeration (128k points)": lambda: order_polytope_as_alcoved(
            fink
        ).lattice_points(4),
    }


def run_inner():
    from orderlevel import kernel_mode

    times = {}
    for name, fn in workloads().items():
        fn()  # warmup: JIT compile or prime caches
        times[name] = min(_timed(fn) for _ in range(3))
    print(json.dumps({"mode": kernel_mode(), "times": times}))


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def run_mode(force_pure: bool) -> dict:
    env = dict(os.environ)
    env["ORDERLEVEL_NO_NUMBA"] = "1" if force_pure else "0"
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--inner"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--inner", action="store_true", help=argparse.SUPPRESS)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()
    if args.inner:
        run_inner()
        return 0

    compiled = run_mode(force_pure=False)
    pure = run_mode(force_pure=True)
    if args.json:
        print(json.dumps({"compiled": compiled, "pure": pure}, indent=2))
        return 0

    if compiled["mode"] != "numba":
        print("note: numba unavailable, both columns ran the pure path")
    width = max(len(k) for k in compiled["times"])
    print(f"{'workload':<{width}}  {'numba':>10}  {'pure':>10}  {'speedup':>8}")
    for name, t_c in compiled["times"].items():
        t_p = pure["times"][name]
        ratio = t_p / t_c if t_c > 0 else float("inf")
        print(f"{name:<{width}}  {t_c:>9.4f}s  {t_p:>9.4f}s  {ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
