"""Timing harness for the complexity checks.

Only ratios are meaningful: absolute seconds depend on the machine.
"""
from __future__ import annotations

import statistics
import time
from collections import defaultdict

import numpy as np

from .filters2d import box_filter, fast_osbf, gaussian_filter, osbf
from .io import BenchRecord

__all__ = ["BENCH_FILTERS", "time_call", "bench_image", "run_bench", "radius_ratios", "size_ratios"]

BENCH_FILTERS = {
    "box": lambda u, r, n, jobs: box_filter(u, r, n, n_jobs=jobs),
    "osbf": lambda u, r, n, jobs: osbf(u, r, n, n_jobs=jobs),
    "fast-osbf": lambda u, r, n, jobs: fast_osbf(u, r, n, n_jobs=jobs),
    "gauss": lambda u, r, n, jobs: gaussian_filter(u, r, 3.0, n),
}


def time_call(fn, repeats=5, warmup=1):
    """Median wall-clock seconds of ``fn()`` over ``repeats`` runs after ``warmup`` runs."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    for _ in range(warmup):
        fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def bench_image(size, seed=0):
    """Deterministic uniform 8-bit noise image of shape ``(size, size)``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.integers(0, 256, size=(size, size)).astype(np.float64)


def run_bench(filters, sizes, radii, iterations=1, repeats=5, warmup=1, n_jobs=None, progress=None):
    records = []
    for size in sizes:
        img = bench_image(size)
        for name in filters:
            fn = BENCH_FILTERS[name]
            for r in radii:
                secs = time_call(lambda: fn(img, r, iterations, n_jobs), repeats, warmup)
                rec = BenchRecord(name, size, size, r, iterations, secs)
                records.append(rec)
                if progress:
                    progress(rec)
    return records


def radius_ratios(records):
    """``{(filter, size): max/min seconds across radii}``."""
    groups = defaultdict(list)
    for rec in records:
        groups[(rec.filter, rec.width)].append(rec.seconds)
    return {k: max(v) / min(v) for k, v in groups.items() if len(v) > 1}


def size_ratios(records):
    """``{(filter, radius): [t(n2)/t(n1), ...]}`` for consecutive sizes, smallest first."""
    groups = defaultdict(dict)
    for rec in records:
        groups[(rec.filter, rec.radius)][rec.width * rec.height] = rec.seconds
    out = {}
    for key, by_n in groups.items():
        ns = sorted(by_n)
        out[key] = [(ns[i + 1] / ns[i], by_n[ns[i + 1]] / by_n[ns[i]]) for i in range(len(ns) - 1)]
    return out
