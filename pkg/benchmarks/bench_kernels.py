"""Compiled kernels against the pure-Python reference implementations.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from motzeta import _pykernels
from motzeta.fields import gf
from motzeta.fourier import LocalLevel, Place, _bilinear

try:
    from motzeta import _kernels
except ImportError:  # pragma: no cover
    _kernels = None


def cases():
    F = gf(31)
    exps = np.array([[3, 0, 0], [0, 2, 0], [1, 0, 1], [0, 0, 0]], dtype=np.int64)
    coefs = np.array([1, 12, 5, 3], dtype=np.int64)
    owner = np.array([0, 0, 1, 1], dtype=np.int64)
    kinds = np.array([0, 2], dtype=np.int64)
    hist = ("system_histogram (F_31^3)",
            lambda m: m.system_histogram(F.add_table, F.mul_table, 31, 3, exps, coefs, owner, kinds))

    howe = ("howe_cover_count ([3,3,2], L=6)", lambda m: m.howe_cover_count([3, 3, 2], 6))
    heights = ("coprime_height_counts (p=2, d=7)", lambda m: m.coprime_height_counts(2, 7))

    v = Place.finite(3, 0)
    lx = LocalLevel(-2, 2)
    ly = LocalLevel(v.nu - 2, v.nu + 2)
    Fq = gf(3)
    xs, ys = lx.carrier(3), ly.carrier(3)
    B = _bilinear(v, lx, ly)
    rng = np.random.default_rng(0)
    phi = rng.integers(-2, 3, size=(len(xs), 3)).astype(np.int64)
    fourier = ("fourier_accumulate (q=3, width 4)",
               lambda m: m.fourier_accumulate(phi if m is _kernels else phi.astype(object), xs, ys, B,
                                              Fq.add_table, Fq.mul_table, Fq.trace, 3))
    return [hist, howe, heights, fourier]


def best_of(fn, repeat: int) -> float:
    out = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t0)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernels unavailable; build with `pip install -e . --no-build-isolation`")
        return
    print(f"{'kernel':40s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>9s}")
    for name, fn in cases():
        a = fn(_pykernels)
        b = fn(_kernels)
        assert np.array_equal(np.asarray(a, dtype=object), np.asarray(b, dtype=object)), name
        tp = best_of(lambda: fn(_pykernels), args.repeat)
        tc = best_of(lambda: fn(_kernels), args.repeat)
        print(f"{name:40s} {tp:12.4f} {tc:12.4f} {tp / tc:9.1f}x")


if __name__ == "__main__":
    main()
