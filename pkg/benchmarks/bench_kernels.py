#!/usr/bin/env python3
"""Benchmark the compiled pair/triple scans against the numpy fallback.

Run: python benchmarks/bench_kernels.py [n]
"""

import sys
import time

import numpy as np

from contractcheck import _kernels_py

try:
    from contractcheck import _kernels_cy
except ImportError:
    _kernels_cy = None


def time_call(fn, *args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 800
    rng = np.random.default_rng(0)
    pts = np.sort(rng.uniform(0, 100, size=n))
    dist = np.abs(pts[:, None] - pts[None, :])
    image = rng.integers(0, n, size=n)
    lhs = dist
    rhs = dist[np.ix_(image, image)]
    eligible = (rhs > 0).astype(np.uint8)

    backends = [("python", _kernels_py)]
    if _kernels_cy is not None:
        backends.append(("cython", _kernels_cy))

    print(f"n = {n} points ({n * (n - 1) // 2} pairs)")
    for name, mod in backends:
        t, r = time_call(mod.min_margin_scan, lhs, rhs, eligible)
        print(f"  min_margin_scan [{name:7s}] {t * 1e3:9.2f} ms  margin={r[0]:.6g}")
    for name, mod in backends:
        t, r = time_call(mod.max_ratio_scan, dist, image)
        print(f"  max_ratio_scan  [{name:7s}] {t * 1e3:9.2f} ms  ratio={r[0]:.6g}")
    n_tri = min(n, 300)
    d_tri = dist[:n_tri, :n_tri]
    print(f"triangle scan at n = {n_tri} ({n_tri ** 3} triples)")
    for name, mod in backends:
        t, r = time_call(mod.triangle_scan, d_tri, 0.0)
        print(f"  triangle_scan   [{name:7s}] {t * 1e3:9.2f} ms  ok={r[0]} worst={r[4]:.6g}")

    if _kernels_cy is not None:
        a = _kernels_py.min_margin_scan(lhs, rhs, eligible)
        b = _kernels_cy.min_margin_scan(lhs, rhs, eligible)
        assert a == b, (a, b)
        print("backends agree on the margin scan")


if __name__ == "__main__":
    main()
