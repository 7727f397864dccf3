#!/usr/bin/env python3
"""Timing comparison of the compiled kernels against the numpy fallback.

Covers the three hot paths: counter-based normal generation, the fused
exponential-span reduction, and an end-to-end Monte Carlo transform.
Run from the repository root after building the extension in place:

    python3 setup.py build_ext --inplace
    python3 benchmarks/bench_backends.py [--count N]
"""

import argparse
import time

import numpy as np

from gaussradon import AffineSubspace, CoordVec, ExponentialFunctional, backends, radon_mc
from gaussradon.backends import purepy


def best_of(repeats, fn):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def row(label, py_time, ext_time):
    speedup = f"{py_time / ext_time:5.1f}x" if ext_time else "   - "
    ext_text = f"{ext_time * 1e3:10.1f}" if ext_time else "       n/a"
    print(f"{label:<28} {py_time * 1e3:10.1f} {ext_text} {speedup}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=2_000_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    have_ext = "ext" in backends.available()
    if not have_ext:
        print("compiled backend not built; timing the numpy fallback only")
    ext = None
    if have_ext:
        from gaussradon.backends import _kernels as ext

    n = args.count
    print(f"\n{'kernel':<28} {'python ms':>10} {'ext ms':>10} speedup")

    py = best_of(args.repeats, lambda: purepy.normals(1, 0, n))
    cx = best_of(args.repeats, lambda: ext.normals(1, 0, n)) if ext else None
    row(f"normals ({n:,})", py, cx)

    rng = np.random.default_rng(0)
    x = rng.normal(size=(200_000, 8))
    w = rng.normal(size=(4, 8)) + 1j * rng.normal(size=(4, 8))
    d = rng.normal(size=4) + 1j * rng.normal(size=4)
    c = rng.normal(size=4) + 1j * rng.normal(size=4)
    py = best_of(args.repeats, lambda: purepy.span_moments(x, w, d, c))
    cx = best_of(args.repeats, lambda: ext.span_moments(x, w, d, c)) if ext else None
    row("span_moments (2e5 x 8, K=4)", py, cx)

    phi = ExponentialFunctional.exponential(CoordVec.unit(2)) \
        + ExponentialFunctional.exponential(CoordVec.unit(3))
    sub = AffineSubspace.hyperplane(0.5, CoordVec.unit(1))

    def transform():
        return radon_mc(phi, sub, 6, n // 2, seed=5)

    previous = backends.active_name()
    try:
        backends.use("python")
        py = best_of(args.repeats, transform)
        cx = None
        if have_ext:
            backends.use("ext")
            cx = best_of(args.repeats, transform)
        row(f"radon_mc ({n // 2:,} x 6)", py, cx)
    finally:
        backends.use(previous)
    print()


if __name__ == "__main__":
    main()
