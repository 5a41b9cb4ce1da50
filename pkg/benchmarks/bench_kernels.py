#!/usr/bin/env python3
"""Benchmark: compiled classification kernel vs the pure-Python fallback.

    python benchmarks/bench_kernels.py [--points 1000000]
"""

import argparse
import time

import numpy as np

from hardylane._kernels import BACKEND, _pure

try:
    from hardylane._kernels import _core
except ImportError:
    _core = None


def sample(n, seed=7):
    rng = np.random.default_rng(seed)
    N = rng.integers(3, 11, n)
    mu0 = -((N - 2) ** 2) / 4.0
    mu1 = mu0 + rng.random(n) * 20.0
    mu2 = mu0 + rng.random(n) * 20.0
    p = rng.random(n) * 19.9 + 0.1
    q = rng.random(n) * 19.9 + 0.1
    return N.astype(np.int64), mu1, mu2, p, q


def bench(fn, args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=1_000_000)
    opts = ap.parse_args()
    n = opts.points
    data = sample(n)

    print(f"classification kernel benchmark ({n:,} points, selected "
          f"backend: {BACKEND})")
    print(f"{'backend':<10} {'classify_codes':>16} {'tau_pair_arrays':>16}")

    t_pure = bench(_pure.classify_codes, data)
    t_pure_tau = bench(_pure.tau_pair_arrays, (data[0], data[1]))
    print(f"{'python':<10} {t_pure:>14.3f} s {t_pure_tau:>14.3f} s")

    if _core is not None:
        t_core = bench(_core.classify_codes, data)
        t_core_tau = bench(_core.tau_pair_arrays, (data[0], data[1]))
        print(f"{'compiled':<10} {t_core:>14.3f} s {t_core_tau:>14.3f} s")
        print(f"speedup: classify {t_pure / t_core:.1f}x, "
              f"tau arrays {t_pure_tau / t_core_tau:.1f}x")
        c1, m1, f1 = _pure.classify_codes(*data)
        c2, m2, f2 = _core.classify_codes(*data)
        agree = (np.array_equal(c1, c2) and np.array_equal(f1, f2)
                 and np.array_equal(m1, m2, equal_nan=True))
        print(f"backend agreement on this sample: {agree}")
    else:
        print("compiled backend not built (run: python setup.py build_ext "
              "--inplace)")


if __name__ == "__main__":
    main()
