"""RMSE, PSNR and SSIM between two planes."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .validation import check_plane

__all__ = ["MetricReport", "rmse", "psnr", "ssim", "compare"]

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _pair(a, b):
    a, b = check_plane(a, "a"), check_plane(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def _mse(a, b):
    d = a - b
    return float(np.mean(d * d))


def rmse(a, b) -> float:
    a, b = _pair(a, b)
    return math.sqrt(_mse(a, b))


def psnr(a, b, peak=255.0) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` for identical planes."""
    if not peak > 0:
        raise ValueError(f"peak must be > 0, got {peak}")
    a, b = _pair(a, b)
    mse = _mse(a, b)
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def _gaussian_window(size, sigma):
    u = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(u * u) / (2.0 * sigma * sigma))
    return g / g.sum()


def _filter_valid(x, g):
    # separable weighted mean over every fully-contained window
    n = g.size
    rows = sliding_window_view(x, n, axis=0) @ g
    return sliding_window_view(rows, n, axis=1) @ g


def ssim(a, b, peak=255.0) -> float:
    """Mean structural similarity.

    11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03; only windows lying
    fully inside the image contribute.
    """
    a, b = _pair(a, b)
    if min(a.shape) < SSIM_WINDOW:
        raise ValueError(f"ssim needs both extents >= {SSIM_WINDOW}, got {a.shape}")
    c1 = (SSIM_K1 * peak) ** 2
    c2 = (SSIM_K2 * peak) ** 2
    g = _gaussian_window(SSIM_WINDOW, SSIM_SIGMA)
    mu_a = _filter_valid(a, g)
    mu_b = _filter_valid(b, g)
    var_a = _filter_valid(a * a, g) - mu_a * mu_a
    var_b = _filter_valid(b * b, g) - mu_b * mu_b
    cov = _filter_valid(a * b, g) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


@dataclass(frozen=True)
class MetricReport:
    rmse: float
    psnr: float
    ssim: float

    def format(self) -> str:
        return f"rmse={self.rmse:.6g} psnr={self.psnr:.6g} ssim={self.ssim:.6g}"


def compare(a, b, peak=255.0) -> MetricReport:
    return MetricReport(rmse(a, b), psnr(a, b, peak), ssim(a, b, peak))
