"""Benchmark the KL projection with the compiled core against the numpy fallback.

The backend is fixed at import time, so this script measures one backend per
process: the parent relaunches itself in a child process per backend (setting
NONLOCALITY_PURE_PYTHON for the fallback), collects JSON timings, and prints a
comparison table with the speedup.

Usage: python3 benchmarks/bench_kl.py [--repeats 5]
"""

import argparse
import json
import math
import os
import statistics
import subprocess
import sys
import time


def _workloads():
    from nonlocality.cglmp import CANONICAL_PHASES, CglmpScenario, scenario_behavior
    from nonlocality.prbox import pr_box_behavior

    a1, a2, b1, b2 = CANONICAL_PHASES
    c = 1.0 / math.sqrt(2.0 + 0.8**2)
    scenario = CglmpScenario(amplitudes=(c, 0.8 * c, c), alpha=(a1, a2), beta=(b1, b2))
    return {
        "pr_box (2,2,2,2)": pr_box_behavior(),
        "qutrit phases (2,2,3,3)": scenario_behavior(scenario),
    }


def _measure(repeats: int) -> dict:
    from nonlocality import kernels
    from nonlocality.polytope import kl_to_local

    rows = {}
    for name, table in _workloads().items():
        times = []
        distance = None
        for _ in range(repeats):
            start = time.perf_counter()
            result = kl_to_local(table)
            times.append(time.perf_counter() - start)
            distance = result.distance_bits
        rows[name] = {"median_s": statistics.median(times), "distance_bits": distance}
    return {"backend": kernels.backend_name(), "rows": rows}


def _child(pure_python: bool, repeats: int) -> dict:
    env = dict(os.environ)
    env.pop("NONLOCALITY_PURE_PYTHON", None)
    if pure_python:
        env["NONLOCALITY_PURE_PYTHON"] = "1"
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--measure", "--repeats", str(repeats)],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(out.stdout)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--measure", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args(argv)

    if args.measure:
        print(json.dumps(_measure(args.repeats)))
        return 0

    fast = _child(pure_python=False, repeats=args.repeats)
    slow = _child(pure_python=True, repeats=args.repeats)
    if fast["backend"] == slow["backend"]:
        print("compiled extension unavailable; both runs used the numpy fallback")

    header = f"{'workload':26} {fast['backend']:>12} {slow['backend']:>12} {'speedup':>9} {'|delta D|':>11}"
    print(header)
    print("-" * len(header))
    for name, row in fast["rows"].items():
        other = slow["rows"][name]
        speedup = other["median_s"] / row["median_s"]
        delta = abs(row["distance_bits"] - other["distance_bits"])
        print(
            f"{name:26} {row['median_s'] * 1e3:10.2f}ms {other['median_s'] * 1e3:10.2f}ms"
            f" {speedup:8.2f}x {delta:11.2e}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
