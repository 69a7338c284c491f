"""Time the hot kernels with numba and with the pure-numpy fallback.

Each backend runs in its own interpreter because the choice is made at
import time from ``MAGFLOW_DISABLE_NUMBA``.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, time
import numpy as np
import magflow
from magflow.chaos import coverage, lyapunov_top
from magflow.flow import integrate, state_from_energy
from magflow.fuchsian import default_group, project_trajectory

repeat = int(__import__("sys").argv[1])
G = default_group()
st = state_from_energy(2.0, 0.1 + 0.05j, 0.3)
cover = integrate(state_from_energy(0.5, 0.1 + 0.05j, 0.3), 20.0, 1e-3)
cases = {
    "integrate 2e4 steps": lambda: integrate(state_from_energy(0.125), 20.0, 1e-3),
    "reduce 2e4 samples": lambda: project_trajectory(cover, G),
    "lyapunov clone, 20 windows": lambda: lyapunov_top(st, 2.0, 20.0, G, burn_in=5),
    "coverage 2e4 steps": lambda: coverage(state_from_energy(0.5, 0.1 + 0.05j, 0.3), 0.5, 20.0, 50, G),
}
out = {"backend": magflow.backend_name(), "times": {}}
for name, fn in cases.items():
    fn()  # warm-up, includes compilation or cache load
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    out["times"][name] = min(ts)
print(json.dumps(out))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ, MAGFLOW_DISABLE_NUMBA="1" if disable else "0")
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    print(f"{'kernel':<30} {fast['backend']:>10} {slow['backend']:>10} {'speed-up':>9}")
    for name, t_fast in fast["times"].items():
        t_slow = slow["times"][name]
        print(f"{name:<30} {t_fast:10.4f} {t_slow:10.4f} {t_slow / t_fast:9.1f}x")


if __name__ == "__main__":
    main()
