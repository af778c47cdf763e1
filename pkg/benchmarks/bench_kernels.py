"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from sphpend import _kernels_py
from sphpend.actions import _nodes

try:
    from sphpend import _kernels_cy
except ImportError:
    _kernels_cy = None


def timed(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_quad(mod, nodes, calls):
    s, c, w = _nodes(nodes)
    cases = [
        (1e-4, 0.3, 1.0, 0.3),
        (0.3, 0.4, 0.6, 1.0),
        (1e-10, 1e-10, 1.2, 1e-4),
    ]

    def run():
        for u, v, w0, l in cases:
            for _ in range(calls // len(cases)):
                mod.quad_sums(u, v, w0, l, s, c, w, True)

    return run


def bench_rk4_full(mod, nsteps):
    y0 = np.array([0.6, 0.0, 0.8, 0.0, 1.2, 0.0])
    out = np.empty((nsteps + 1, 6))

    def run():
        mod.rk4_full(y0, 1e-4, nsteps, out)

    return run


def bench_return(mod):
    y0 = np.array([-0.4, 0.0, 2.0])

    def run():
        mod.reduced_return(y0, 0.5, 1e-3, 100.0)

    return run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    workloads = [
        ("quadrature sums, 256 nodes x 300 calls", lambda m: bench_quad(m, 256, 300)),
        ("quadrature sums, 4096 nodes x 30 calls", lambda m: bench_quad(m, 4096, 30)),
        ("full-system RK4, 1e5 steps", lambda m: bench_rk4_full(m, 100_000)),
        ("reduced first return, dt=1e-3", bench_return),
    ]

    print(f"{'workload':<42} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, make in workloads:
        t_py = timed(make(_kernels_py), args.repeat)
        if _kernels_cy is None:
            print(f"{name:<42} {t_py * 1e3:>8.1f}ms {'-':>10} {'-':>8}")
            continue
        t_cy = timed(make(_kernels_cy), args.repeat)
        print(
            f"{name:<42} {t_py * 1e3:>8.1f}ms {t_cy * 1e3:>8.1f}ms "
            f"{t_py / t_cy:>7.1f}x"
        )
    if _kernels_cy is None:
        print("\ncompiled kernels not built; install with Cython to compare")


if __name__ == "__main__":
    main()
