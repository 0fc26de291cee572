"""Deterministic synthetic test images and volumes.

Random fields come from numpy's PCG64 bit generator seeded explicitly with
the caller's 64-bit seed, so a given (seed, sigma, shape) always yields the
same samples for a given numpy release.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ImagePlane, Volume
from .validation import wrap_like

__all__ = [
    "NoiseSpec",
    "DEFAULT_NOISE_SIGMA",
    "checkerboard",
    "step",
    "impulse",
    "step_volume",
    "add_gaussian_noise",
    "noisy_checkerboard",
    "phantom",
]

# noise level for the noisy-checkerboard experiment, 0-255 scale
DEFAULT_NOISE_SIGMA = 20.0


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = DEFAULT_NOISE_SIGMA
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"noise sigma must be >= 0, got {self.sigma}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def _rng(seed):
    return np.random.Generator(np.random.PCG64(int(seed)))


def _check_extents(*extents):
    if min(extents) < 1:
        raise ValueError(f"extents must be >= 1, got {extents}")


def checkerboard(width, height, cell, lo=0.0, hi=255.0) -> ImagePlane:
    """``lo`` where ``x // cell + y // cell`` is even, ``hi`` elsewhere."""
    _check_extents(width, height)
    if cell < 1:
        raise ValueError(f"cell must be >= 1, got {cell}")
    parity = (np.arange(height)[:, None] // cell + np.arange(width)[None, :] // cell) % 2
    return ImagePlane.from_array(np.where(parity == 0, float(lo), float(hi)))


def step(width, height, edge_col, lo=0.0, hi=100.0) -> ImagePlane:
    """Vertical step edge: columns ``< edge_col`` are ``lo``, the rest ``hi``."""
    _check_extents(width, height)
    if not 0 < edge_col < width:
        raise ValueError(f"edge_col must satisfy 0 < edge_col < {width}, got {edge_col}")
    row = np.where(np.arange(width) < edge_col, float(lo), float(hi))
    return ImagePlane.from_array(np.broadcast_to(row, (height, width)))


def impulse(width, height, x, y, amplitude=1.0) -> ImagePlane:
    _check_extents(width, height)
    if not (0 <= x < width and 0 <= y < height):
        raise IndexError(f"impulse position ({x}, {y}) outside {width}x{height}")
    arr = np.zeros((height, width))
    arr[y, x] = amplitude
    return ImagePlane.from_array(arr)


def step_volume(width, height, depth, edge, lo=0.0, hi=100.0, axis="x") -> Volume:
    """Axis-aligned step: samples with coordinate ``< edge`` along ``axis`` are ``lo``."""
    _check_extents(width, height, depth)
    axes = {"x": (2, width), "y": (1, height), "z": (0, depth)}
    if axis not in axes:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    dim, n = axes[axis]
    if not 0 < edge < n:
        raise ValueError(f"edge must satisfy 0 < edge < {n}, got {edge}")
    shape = [1, 1, 1]
    shape[dim] = n
    line = np.where(np.arange(n) < edge, float(lo), float(hi)).reshape(shape)
    return Volume.from_array(np.broadcast_to(line, (depth, height, width)))


def add_gaussian_noise(data, spec: NoiseSpec):
    """Add i.i.d. N(0, sigma^2) noise; no clamping. Works on planes and volumes."""
    if isinstance(data, (ImagePlane, Volume)):
        arr = data.to_array()
    else:
        arr = np.array(data, dtype=np.float64)
    if spec.sigma == 0:
        return wrap_like(data, arr)
    noise = _rng(spec.seed).standard_normal(arr.shape)
    return wrap_like(data, arr + spec.sigma * noise)


def noisy_checkerboard(width, height, cell, lo=0.0, hi=255.0, spec=NoiseSpec()) -> ImagePlane:
    return add_gaussian_noise(checkerboard(width, height, cell, lo, hi), spec)


def phantom(width=256, height=256, seed=0) -> ImagePlane:
    """Natural-statistics 8-bit test image (dead-leaves model).

    Opaque disks with radius density proportional to ``rho^-3`` (the
    scale-invariant exponent) are stacked front to back until the plane is
    covered, then faint low-frequency shading and sensor noise (sigma 3)
    are added and the result is quantized to integers in [0, 255].
    """
    _check_extents(width, height)
    rng = _rng(seed)
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    rho_min, rho_max = 4.0, 0.4 * max(width, height)
    img = np.full((height, width), np.nan)
    uncovered = np.ones((height, width), dtype=bool)
    a, b = rho_min ** -2, rho_max ** -2
    for _ in range(20000):
        # inverse-CDF sample of p(rho) ~ rho^-3 on [rho_min, rho_max]
        rho = (a + rng.uniform() * (b - a)) ** -0.5
        cx = rng.uniform(-rho, width + rho)
        cy = rng.uniform(-rho, height + rho)
        level = rng.uniform(30.0, 225.0)
        hit = uncovered & ((x - cx) ** 2 + (y - cy) ** 2 < rho * rho)
        img[hit] = level
        uncovered &= ~hit
        if not uncovered.any():
            break
    img[uncovered] = 128.0
    img += 8.0 * np.sin(2 * np.pi * (x / width + 0.5 * y / height))
    img += rng.normal(0.0, 3.0, size=img.shape)
    return ImagePlane.from_array(np.clip(np.floor(img + 0.5), 0, 255))
