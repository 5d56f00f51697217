"""Compare the FLINT backend with the pure-Python (sympy) fallback.

Each workload runs in a fresh interpreter because the backend is chosen at
import time from WALG_BACKEND.

    python3 benchmarks/bench_backends.py [--repeat 3] [--only NAME] [--timeout S]
"""

from __future__ import annotations

import argparse
import os
import statistics
import subprocess
import sys

WORKLOADS = {
    "scalar_arith": """
from walg.scalars import ZERO, var, kappa
q, g = var('q1') * var('q2'), var('m') * var('u') / var('v')
acc = ZERO
for n in range(1, 7):
    for r in range(1, 4):
        acc = acc + (1 - q ** (r * n) * g**n) / kappa(n, r)
""",
    "heisenberg_r2": "from walg.fock import heisenberg_suite; heisenberg_suite(2, 3, 5)",
    "residue_I_bis_n3": "from walg.residue import contour_difference_check as c; c('I_bis', 3, 2)",
    "vertex_r1": "from walg.vertex import vertex_suite; vertex_suite(1, 2, 4)",
    "verma_n4": "from walg.verma import verma_suite; verma_suite(4)",
}

TIMER = """
import time
t0 = time.perf_counter()
{body}
print(time.perf_counter() - t0)
"""


def run(backend: str, body: str, timeout: float) -> float:
    env = dict(os.environ, WALG_BACKEND=backend)
    try:
        proc = subprocess.run(
            [sys.executable, "-c", TIMER.format(body=body)],
            env=env, capture_output=True, text=True, check=True, timeout=timeout,
        )
    except subprocess.TimeoutExpired:
        return float("inf")
    return float(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--only", choices=sorted(WORKLOADS))
    parser.add_argument("--timeout", type=float, default=600, help="seconds per run; slower runs print inf")
    args = parser.parse_args()
    names = [args.only] if args.only else list(WORKLOADS)
    print(f"{'workload':20} {'flint s':>9} {'python s':>9} {'ratio':>7}", flush=True)
    for name in names:
        body = WORKLOADS[name]
        fast = statistics.median(run("flint", body, args.timeout) for _ in range(args.repeat))
        slow = statistics.median(run("python", body, args.timeout) for _ in range(args.repeat))
        print(f"{name:20} {fast:9.3f} {slow:9.3f} {slow / fast:7.1f}", flush=True)


if __name__ == "__main__":
    main()
