"""Acceptance criteria, one test each, run at the stated tolerances.

Each test prints a single ``[PASS]`` / ``[FAIL]`` line (also repeated in the
terminal summary) before asserting.
"""
import time

import numpy as np
import pytest

from oracles import box_kernel_taps, naive_dft_magnitude, naive_osbf_step, shifted_osbf_step
from osbf.bench import bench_image, time_call
from osbf.filters2d import (
    box_filter,
    box_kernel,
    fast_osbf,
    gaussian_kernel,
    kernel_spectrum_magnitude,
    make_one_sided_kernels,
    osbf,
)
from osbf.filters3d import box_filter_3d, osbf_3d
from osbf.metrics import psnr, rmse
from osbf.synth import NoiseSpec, add_gaussian_noise, checkerboard, noisy_checkerboard, phantom, step, step_volume

pytestmark = pytest.mark.acceptance


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_01_edge_fixed_point(record_criterion):
    img = step(256, 256, 128, lo=0.0, hi=100.0).to_array()

    def run():
        return max(float(np.abs(osbf(img, r, 30) - img).max()) for r in (1, 2, 5, 10))

    worst, secs = _timed(run)
    ok = worst <= 1e-6 and secs < 5
    record_criterion(1, "step edge fixed point", ok, f"max change {worst:.2e} (<= 1e-6), {secs:.2f}s (< 5s)")
    assert ok


def test_criterion_02_corner_fixed_point(record_criterion):
    img = checkerboard(256, 256, 32).to_array()

    def run():
        return max(float(np.abs(osbf(img, r, 1) - img).max()) for r in range(1, 11))

    worst, secs = _timed(run)
    ok = worst <= 1e-6 and secs < 5
    record_criterion(2, "checkerboard corner fixed point", ok, f"max change {worst:.2e} (<= 1e-6), {secs:.2f}s (< 5s)")
    assert ok


def test_criterion_03_denoising(record_criterion):
    clean = checkerboard(256, 256, 32).to_array()
    noisy = noisy_checkerboard(256, 256, 32, spec=NoiseSpec(20.0, 0)).to_array()

    def run():
        return {r: psnr(osbf(noisy, r, 10), clean) - psnr(box_filter(noisy, r, 10), clean) for r in range(3, 11)}

    gains, secs = _timed(run)
    worst_r = min(gains, key=gains.get)
    ok = gains[worst_r] >= 3.0 and secs < 30
    record_criterion(
        3, "OSBF beats box on noisy checkerboard", ok,
        f"min PSNR gain {gains[worst_r]:.2f} dB at r={worst_r} (>= 3 dB), {secs:.2f}s (< 30s)",
    )
    assert ok


def test_criterion_04_exact_vs_fast(record_criterion):
    img = phantom(256, 256, seed=0).to_array()
    checkpoints = (1, 10, 50, 100)

    def run():
        table = {}
        for r in range(2, 11):
            exact, fast = img, img
            done = 0
            for n in checkpoints:
                exact = osbf(exact, r, n - done)
                fast = fast_osbf(fast, r, n - done)
                done = n
                table[(r, n)] = rmse(exact, fast)
        return table

    table, secs = _timed(run)
    (r_max, n_max), worst = max(table.items(), key=lambda kv: kv[1])
    ok = worst <= 5.0 and secs < 120
    record_criterion(
        4, "exact vs fast OSBF agreement", ok,
        f"max RMSE {worst:.3f} at r={r_max}, {n_max} iterations (<= 5), {secs:.1f}s (< 120s)",
    )
    assert ok


def test_criterion_05_oracle_equivalence(record_criterion):
    rng = np.random.default_rng(2024)
    planes = [rng.uniform(0, 255, (64, 64)) for _ in range(50)]

    def brute(a, r, n):
        for _ in range(n):
            a = shifted_osbf_step(a, r)
        return a

    def run():
        worst = 0.0
        for a in planes:
            for r in (1, 2, 3, 5):
                worst = max(worst, float(np.abs(osbf(a, r, 3) - brute(a, r, 3)).max()))
        return worst

    worst, secs = _timed(run)
    # the vectorized brute force is itself checked against the literal per-pixel loop
    small = planes[0][:16, :16]
    oracle_gap = max(float(np.abs(shifted_osbf_step(small, r) - naive_osbf_step(small, r)).max()) for r in (1, 2, 3, 5))
    ok = worst <= 1e-9 and oracle_gap <= 1e-9 and secs < 60
    record_criterion(
        5, "SAT OSBF equals brute force", ok,
        f"max diff {worst:.2e} (<= 1e-9), oracle cross-check {oracle_gap:.1e}, {secs:.1f}s (< 60s)",
    )
    assert ok


def test_criterion_06_radius_independence(record_criterion):
    img = bench_image(1024)
    t0 = time.perf_counter()
    ratios = {}
    for name, fn in (("box", box_filter), ("osbf", osbf)):
        times = [time_call(lambda: fn(img, r, 1), repeats=5, warmup=1) for r in (2, 8, 32)]
        ratios[name] = max(times) / min(times)
    secs = time.perf_counter() - t0
    ok = all(v <= 1.5 for v in ratios.values()) and secs < 120
    record_criterion(
        6, "runtime independent of radius", ok,
        f"max/min box {ratios['box']:.3f}, osbf {ratios['osbf']:.3f} (<= 1.5), {secs:.1f}s (< 120s)",
    )
    assert ok


def test_criterion_07_linear_in_pixels(record_criterion):
    sizes = (256, 512, 1024, 2048)
    t0 = time.perf_counter()
    steps = {}
    for name, fn in (("box", box_filter), ("osbf", osbf), ("fast-osbf", fast_osbf)):
        times = []
        for n in sizes:
            img = bench_image(n)
            times.append(time_call(lambda: fn(img, 8, 1), repeats=5, warmup=1))
        steps[name] = [b / a for a, b in zip(times, times[1:])]
    secs = time.perf_counter() - t0
    flat = [s for v in steps.values() for s in v]
    ok = all(2.0 <= s <= 8.0 for s in flat) and secs < 300
    detail = ", ".join(f"{k} " + "/".join(f"{s:.2f}" for s in v) for k, v in steps.items())
    record_criterion(7, "runtime linear in pixel count", ok, f"ratios per 4x N in [2, 8]: {detail}; {secs:.1f}s (< 300s)")
    assert ok


def test_criterion_08_volume(record_criterion):
    vol = step_volume(64, 64, 64, 32, lo=0.0, hi=100.0, axis="x")
    clean = vol.to_array()

    def run():
        ident = float(np.abs(osbf_3d(vol, 2, 1).to_array() - clean).max())
        noisy = add_gaussian_noise(vol, NoiseSpec(20.0, 0))
        e_os = rmse_3d(osbf_3d(noisy, 2, 1).to_array(), clean)
        e_box = rmse_3d(box_filter_3d(noisy, 2, 1).to_array(), clean)
        return ident, e_os, e_box

    (ident, e_os, e_box), secs = _timed(run)
    ok = ident <= 1e-6 and e_os < e_box and secs < 60
    record_criterion(
        8, "3D step fixed point and denoising", ok,
        f"identity {ident:.1e} (<= 1e-6), RMSE osbf3d {e_os:.2f} < box3d {e_box:.2f}, {secs:.1f}s (< 60s)",
    )
    assert ok


def rmse_3d(a, b):
    return float(np.sqrt(np.mean((a - b) ** 2)))


def test_criterion_09_kernel_algebra(record_criterion):
    def run():
        box = make_one_sided_kernels(box_kernel(2))
        weights_ok = True
        for i in range(1, 9):
            d = box.dense(i)
            want = 1 / 9 if i <= 4 else 1 / 15
            weights_ok &= bool(np.all((d == 0) | (d == want)))
        gauss = make_one_sided_kernels(gaussian_kernel(5, 3.0))
        sum_err = max(abs(float(gauss.dense(i).sum()) - 1.0) for i in range(1, 9))
        return weights_ok, sum_err

    (weights_ok, sum_err), secs = _timed(run)
    ok = weights_ok and sum_err <= 1e-12 and secs < 1
    record_criterion(
        9, "one-sided kernel weights", ok,
        f"box weights exact 1/9 and 1/15: {weights_ok}, Gaussian sum error {sum_err:.1e} (<= 1e-12), {secs:.3f}s (< 1s)",
    )
    assert ok


def test_criterion_10_spectrum(record_criterion):
    grid = 64
    c = grid // 2

    def run():
        dc, gap = 0.0, 0.0
        for i in range(1, 9):
            mag = kernel_spectrum_magnitude(i, 1, grid)
            dc = max(dc, float(mag[c, c]))
            gap = max(gap, float(np.abs(mag - naive_dft_magnitude(box_kernel_taps(i, 1, grid), grid)).max()))
        return dc, gap

    (dc, gap), secs = _timed(run)
    ok = dc <= 1e-9 and gap <= 1e-9 and secs < 10
    record_criterion(10, "kernel spectra", ok, f"max DC {dc:.1e}, max diff vs naive DFT {gap:.1e} (<= 1e-9), {secs:.2f}s (< 10s)")
    assert ok


def _converged_at(img, r, total=100, fraction=0.95):
    curve = []
    u = img
    for _ in range(total):
        u = osbf(u, r, 1)
        curve.append(rmse(img, u))
    target = fraction * curve[-1]
    return next(k for k, v in enumerate(curve, start=1) if v >= target)


def test_criterion_11_convergence_ordering(record_criterion):
    img = phantom(256, 256, seed=0).to_array()
    (n2, n10), secs = _timed(lambda: (_converged_at(img, 2), _converged_at(img, 10)))
    ok = n10 < n2 and secs < 120
    record_criterion(
        11, "larger radius converges sooner", ok,
        f"95% point r=10 at {n10} < r=2 at {n2} iterations, {secs:.1f}s (< 120s)",
    )
    assert ok
