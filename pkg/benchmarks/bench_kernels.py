#!/usr/bin/env python
"""Compare the compiled and numpy exponential-sum kernels.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import math
import time

import numpy as np

from hzlab import _backend

CASES = [
    # (label, number of terms, grid points)
    ("dirichlet K=64", 64, 200_000),
    ("dirichlet K=1000", 1000, 50_000),
    ("zeta main sum t~1e3", 1100, 40_000),
    ("zeta main sum t~3e3", 3520, 20_000),
]


def timeit(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if _backend._compiled is not None else [])
    print(f"{'case':<24}{'backend':>8}{'seconds':>10}{'ns/term-pt':>12}{'max |diff|':>12}")
    for label, n, count in CASES:
        logs = np.log(np.arange(1, n + 1) + 0.3)
        coeffs = np.exp(-0.5 * logs)
        ref = None
        for backend in backends:
            secs, out = timeit(lambda: _backend.expsum_grid(-logs, coeffs, 100.0, 0.025,
                                                            count, backend=backend),
                               args.repeat)
            diff = 0.0 if ref is None else float(np.max(np.abs(out - ref)))
            ref = out if ref is None else ref
            print(f"{label:<24}{backend:>8}{secs:>10.3f}{1e9 * secs / (n * count):>12.2f}"
                  f"{diff:>12.1e}")
    if len(backends) == 1:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
