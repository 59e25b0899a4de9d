"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Part one times basis evaluation on assembly-sized node sets with both
paths in one process. Part two runs a whole solve in a subprocess with
and without BALLSPECTRAL_DISABLE_JIT=1 to show the end-to-end effect.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from ballspectral import kernels
from ballspectral._accel import HAVE_NUMBA
from ballspectral.quadrature import ball_rule, disk_rule

CASES = [("disk", 2, n) for n in (10, 16, 24)] + [("ball", 3, n) for n in (6, 10, 16)]


def best_time(fn, repeat):
    fn()  # warm-up, includes compilation on the first jit call
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_table(repeat):
    print(f"{'domain':<6} {'n':>3} {'nodes':>7} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for name, d, n in CASES:
        rule = disk_rule(n + 4) if d == 2 else ball_rule(n + 4)
        pts = np.ascontiguousarray(rule.nodes[:2048])
        fn = kernels.ridge_basis if d == 2 else kernels.ball_basis
        t_np = best_time(lambda: fn(pts, n, use_jit=False), repeat)
        if HAVE_NUMBA:
            t_jit = best_time(lambda: fn(pts, n, use_jit=True), repeat)
            a, b = fn(pts, n, use_jit=True)[0], fn(pts, n, use_jit=False)[0]
            assert np.allclose(a, b, atol=1e-12), "paths disagree"
            print(f"{name:<6} {n:>3} {len(pts):>7} {t_jit:>10.4f} {t_np:>10.4f} {t_np / t_jit:>8.1f}")
        else:
            print(f"{name:<6} {n:>3} {len(pts):>7} {'n/a':>10} {t_np:>10.4f} {'':>8}")


def end_to_end(case, degree):
    cmd = [sys.executable, "-m", "ballspectral.cli", "solve", "--case", case, "--degrees", str(degree)]
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, BALLSPECTRAL_DISABLE_JIT=flag)
        t0 = time.perf_counter()
        out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout
        wall = time.perf_counter() - t0
        row = out.strip().splitlines()[1]
        print(f"{case:<17} n={degree:<3} {label:<6} wall {wall:6.2f}s  row {row}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-solve", action="store_true", help="only time the kernels")
    args = ap.parse_args()
    kernel_table(args.repeat)
    if not args.skip_solve:
        print()
        end_to_end("planar-quadratic", 24)
        end_to_end("ellipsoid", 12)


if __name__ == "__main__":
    main()
