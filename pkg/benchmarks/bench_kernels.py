#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the numpy fallback.

Times the batched elimination-cost kernel (the solver's hot loop) on
representative shapes, checks that both backends agree numerically, and
times one full default solve end to end under each backend (the fallback
run happens in a subprocess with SHEPWM_PURE_PYTHON=1).

Run:  python benchmarks/bench_kernels.py
"""

import math
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from shepwm import _kernels_py

try:
    from shepwm import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

ORDERS = np.array([3, 5, 7, 9, 11], dtype=np.int64)
SIGNS6 = np.array([1, -1, 1, 1, -1, -1], dtype=np.float64)
SIGNS8 = np.array([1, -1, 1, 1, -1, 1, -1, -1], dtype=np.float64)


def bench_cost(impl, pts, signs, repeat=200):
    call = lambda: impl.she_cost_batch(pts, signs, ORDERS, 0.8, 100.0, 10.0, 2)
    call()  # warm up
    best = min(timeit.repeat(call, number=1, repeat=repeat))
    return best


def check_agreement():
    rng = np.random.default_rng(7)
    pts = rng.random((400, 6)) * (math.pi / 2)
    a = _kernels_py.she_cost_batch(pts, SIGNS6, ORDERS, 0.8, 100.0, 10.0, 2)
    b = _kernels_c.she_cost_batch(pts, SIGNS6, ORDERS, 0.8, 100.0, 10.0, 2)
    rel = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
    print(f"backend agreement: max relative cost difference {rel:.2e}")
    if rel > 1e-12:
        raise SystemExit("backends disagree beyond tolerance")


def time_solve(env_value):
    code = (
        "import time; from shepwm import PsoConfig, SheProblem, solve, kernels; "
        "t0=time.perf_counter(); "
        "solve(SheProblem(target_m=1.0), PsoConfig(seed=42)); "
        "print(kernels.backend(), time.perf_counter()-t0)"
    )
    env = dict(os.environ)
    env["SHEPWM_PURE_PYTHON"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    backend, seconds = out.stdout.split()
    return backend, float(seconds)


def main():
    if _kernels_c is None:
        print("compiled extension not built; run `python setup.py build_ext "
              "--inplace` first")
        raise SystemExit(1)

    check_agreement()
    rng = np.random.default_rng(0)
    shapes = [
        ("swarm 50 x K6", rng.random((50, 6)) * (math.pi / 2), SIGNS6),
        ("swarm 50 x K8", rng.random((50, 8)) * (math.pi / 2), SIGNS8),
        ("swarm 500 x K6", rng.random((500, 6)) * (math.pi / 2), SIGNS6),
    ]
    print(f"\n{'cost batch shape':<18} {'numpy':>12} {'compiled':>12} {'speedup':>9}")
    for name, pts, signs in shapes:
        t_py = bench_cost(_kernels_py, pts, signs)
        t_c = bench_cost(_kernels_c, pts, signs)
        print(f"{name:<18} {1e6 * t_py:>10.1f}us {1e6 * t_c:>10.1f}us "
              f"{t_py / t_c:>8.1f}x")

    print("\nfull default solve (50 particles x 500 iterations x 5 restarts):")
    for env_value in ("1", "0"):
        backend, seconds = time_solve(env_value)
        print(f"  {backend:<9} {seconds:.2f}s")


if __name__ == "__main__":
    main()
