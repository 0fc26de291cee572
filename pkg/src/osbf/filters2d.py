"""Box, one-sided box, fast one-sided box and generic one-sided filters in 2D.

Every filter iterates Jacobi-style: iteration ``t + 1`` is computed from the
complete iteration-``t`` plane. Windows are clipped to the image and means
are taken over the in-domain pixels only.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import SUBWINDOWS, FilterConfig, ImagePlane, MultiChannelImage, SeparableKernel
from .integral import SummedAreaTable
from .validation import check_iterations, check_plane, check_radius, wrap_like

__all__ = [
    "SubWindowMeans",
    "OneSidedKernelSet",
    "box_filter",
    "subwindow_means",
    "osbf_step",
    "osbf",
    "fast_osbf_step",
    "fast_osbf",
    "box_kernel",
    "gaussian_kernel",
    "make_one_sided_kernels",
    "one_sided_filter",
    "gaussian_filter",
    "kernel_spectrum",
    "kernel_spectrum_magnitude",
    "filter_multichannel",
    "apply_filter",
]


class SubWindowMeans(NamedTuple):
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    a6: float
    a7: float
    a8: float


# row blocks are sized so per-block temporaries stay cache-resident
_BLOCK_PIXELS = 1 << 16


def _bands(n, width):
    rows = max(1, _BLOCK_PIXELS // max(width, 1))
    return [(a, min(a + rows, n)) for a in range(0, n, rows)]


def _run_bands(fn, n, n_jobs, out):
    """Fill ``out[a:b]`` with ``fn((a, b))`` over row blocks, optionally threaded.

    Each output element goes through the same elementwise operations whatever
    the blocking or thread count, so results do not depend on ``n_jobs``.
    """
    bands = _bands(n, out.shape[1] if out.ndim > 1 else 1)
    if not n_jobs or n_jobs <= 1 or len(bands) == 1:
        for a, b in bands:
            out[a:b] = fn((a, b))
        return out
    with ThreadPoolExecutor(max_workers=int(n_jobs)) as pool:
        for (a, b), res in zip(bands, pool.map(fn, bands)):
            out[a:b] = res
    return out


def _select_closest(center, candidates):
    """Per pixel, the candidate closest to ``center``; earlier candidates win ties."""
    it = iter(candidates)
    best = next(it)
    best_dist = np.abs(best - center)
    for cand in it:
        dist = np.abs(cand - center)
        closer = dist < best_dist
        best = np.where(closer, cand, best)
        best_dist = np.where(closer, dist, best_dist)
    return best


def _iterate(step, plane, r, iterations, **kw):
    r = check_radius(r)
    iterations = check_iterations(iterations)
    u = check_plane(plane)
    for _ in range(iterations):
        u = step(u, r, **kw)
    return wrap_like(plane, u)


def _box_step(u, r, n_jobs=None):
    sat = SummedAreaTable(u)
    sat.padded(r + 1)
    out = np.empty_like(u)
    return _run_bands(lambda rows: sat.window_means(-r, r, -r, r, rows=rows), u.shape[0], n_jobs, out)


def box_filter(plane, r, iterations=1, n_jobs=None):
    """Classical box filter over the full ``(2r+1)^2`` window, iterated."""
    return _iterate(_box_step, plane, r, iterations, n_jobs=n_jobs)


def subwindow_means(sat: SummedAreaTable, x, y, r) -> SubWindowMeans:
    """The eight one-sided window means around pixel ``(x, y)``."""
    r = check_radius(r)
    if not (0 <= x < sat.width and 0 <= y < sat.height):
        raise IndexError(f"({x}, {y}) outside {sat.width}x{sat.height} image")
    means = []
    for w in SUBWINDOWS:
        du0, du1, dv0, dv1 = w.offsets(r)
        means.append(sat.rect_mean(x + du0, y + dv0, x + du1, y + dv1))
    return SubWindowMeans(*means)


def _osbf_step(u, r, n_jobs=None):
    sat = SummedAreaTable(u)
    sat.padded(r + 1)

    def band(rows):
        center = u[rows[0]:rows[1]]
        return _select_closest(
            center, (sat.window_means(*w.offsets(r), rows=rows) for w in SUBWINDOWS)
        )

    return _run_bands(band, u.shape[0], n_jobs, np.empty_like(u))


def osbf_step(plane, r, n_jobs=None):
    """One iteration of the exact one-sided box filter.

    Each pixel is replaced by whichever of its eight one-sided window means
    is closest to its current value.
    """
    return _iterate(_osbf_step, plane, r, 1, n_jobs=n_jobs)


def osbf(plane, r, iterations=10, n_jobs=None):
    """Exact one-sided box filter.

    Parameters
    ----------
    plane : ImagePlane or array_like of shape (height, width)
    r : int
        Window radius, >= 1.
    iterations : int
        Number of Jacobi iterations; 0 returns a copy of the input.
    n_jobs : int, optional
        Worker threads over row bands. Output does not depend on it.

    Returns
    -------
    Filtered plane, same container type as ``plane``.
    """
    return _iterate(_osbf_step, plane, r, iterations, n_jobs=n_jobs)


def _fast_candidates(q, r, rows):
    # q is the quarter-mean field edge-padded by r on the high side of each axis
    a, b = rows
    w = q.shape[1] - r
    q00 = q[a:b, :w]
    qr0 = q[a:b, r:r + w]
    q0r = q[a + r:b + r, :w]
    qrr = q[a + r:b + r, r:r + w]
    yield q00
    yield qr0
    yield q0r
    yield qrr
    yield (q00 + q0r) / 2
    yield (qr0 + qrr) / 2
    yield (q00 + qr0) / 2
    yield (q0r + qrr) / 2


def _quarter_field(u, r, shift_mode):
    """Mean over ``[x-r, x] x [y-r, y]`` for x, y up to ``r`` past the far edges.

    With ``shift_mode="valid"`` the out-of-image positions are clipped windows
    like every other mean in this package; with ``"clamp"`` they repeat the
    nearest in-image value.
    """
    h, w = u.shape
    sat = SummedAreaTable(u)
    if shift_mode == "clamp":
        return np.pad(sat.window_means(-r, 0, -r, 0), ((0, r), (0, r)), mode="edge")
    if shift_mode != "valid":
        raise ValueError(f"shift_mode must be 'valid' or 'clamp', got {shift_mode!r}")
    p = r + 1
    t = sat.padded(p)
    xs = np.arange(w + r)
    nx = np.minimum(xs, w - 1) - np.maximum(xs - r, 0) + 1
    # padded index = table index + p; table corners are (X - r) and (X + 1)
    lo_x, hi_x = slice(p - r, p + w), slice(p + 1, p + w + r + 1)
    q = np.empty((h + r, w + r))
    for a, b in _bands(h + r, w + r):
        ys = np.arange(a, b)
        ny = np.minimum(ys, h - 1) - np.maximum(ys - r, 0) + 1
        lo_y, hi_y = slice(p - r + a, p - r + b), slice(p + 1 + a, p + 1 + b)
        total = t[hi_y, hi_x] - t[lo_y, hi_x] - t[hi_y, lo_x] + t[lo_y, lo_x]
        q[a:b] = total / np.outer(ny, nx).astype(np.float64)
    return q


def _fast_osbf_step(u, r, n_jobs=None, shift_mode="valid"):
    # one quarter-mean field; the other quarters are the same field shifted by r
    q = _quarter_field(u, r, shift_mode)

    def band(rows):
        return _select_closest(u[rows[0]:rows[1]], _fast_candidates(q, r, rows))

    return _run_bands(band, u.shape[0], n_jobs, np.empty_like(u))


def fast_osbf_step(plane, r, n_jobs=None, shift_mode="valid"):
    return _iterate(_fast_osbf_step, plane, r, 1, n_jobs=n_jobs, shift_mode=shift_mode)


def fast_osbf(plane, r, iterations=10, n_jobs=None, shift_mode="valid"):
    """Approximate one-sided box filter built from a single quarter-mean field.

    Quarter candidates are the field looked up at ``(x, y)``, ``(x+r, y)``,
    ``(x, y+r)`` and ``(x+r, y+r)``; half-window candidates average adjacent
    quarter pairs. ``shift_mode`` controls lookups past the right/bottom edge:
    ``"valid"`` (default) uses the clipped window there, which matches the
    exact filter's quarter means; ``"clamp"`` reuses the nearest in-image
    position.
    """
    return _iterate(_fast_osbf_step, plane, r, iterations, n_jobs=n_jobs, shift_mode=shift_mode)


def box_kernel(r) -> SeparableKernel:
    r = check_radius(r)
    return SeparableKernel(tuple([1.0] * (2 * r + 1)), -r)


def gaussian_kernel(r, sigma) -> SeparableKernel:
    """Sampled Gaussian ``exp(-u^2 / (2 sigma^2))`` on ``[-r, r]``, normalized."""
    r = check_radius(r)
    if not sigma > 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    u = np.arange(-r, r + 1, dtype=np.float64)
    return SeparableKernel(tuple(np.exp(-(u * u) / (2.0 * sigma * sigma))), -r)


_FACTOR = {(-1, 0): "minus", (0, 1): "plus", (-1, 1): "full"}


@dataclass(frozen=True)
class OneSidedKernelSet:
    """Eight separable 2D kernels, one per sub-window, as ``(k_x, k_y)`` pairs.

    Kernel ``i`` is applied as a correlation,
    ``sum_{u,v} k_x(u) k_y(v) U(x+u, y+v)``, so its support matches
    sub-window ``i``.
    """

    minus: SeparableKernel
    plus: SeparableKernel
    full: SeparableKernel

    @property
    def radius(self) -> int:
        return self.full.u_max

    def pair(self, i):
        w = SUBWINDOWS[i - 1]
        return (
            getattr(self, _FACTOR[(w.u_lo, w.u_hi)]),
            getattr(self, _FACTOR[(w.v_lo, w.v_hi)]),
        )

    @property
    def pairs(self):
        return tuple(self.pair(i) for i in range(1, 9))

    def dense(self, i) -> np.ndarray:
        """Kernel ``i`` as a ``(2r+1, 2r+1)`` array indexed ``[v + r, u + r]``."""
        r = self.radius
        kx, ky = self.pair(i)
        out = np.zeros((2 * r + 1, 2 * r + 1))
        out[ky.u_min + r:ky.u_max + r + 1, kx.u_min + r:kx.u_max + r + 1] = np.outer(
            ky.as_array(), kx.as_array()
        )
        return out


def make_one_sided_kernels(base: SeparableKernel) -> OneSidedKernelSet:
    """Split a centered kernel into normalized one-sided halves.

    Both halves keep the center tap, so every kernel's support contains the
    center pixel like the sub-windows do.
    """
    r = base.u_max
    if base.u_min != -r or r < 1:
        raise ValueError("base kernel must be centered with support [-r, r], r >= 1")
    return OneSidedKernelSet(minus=base.restrict(-r, 0), plus=base.restrict(0, r), full=base)


def _correlate_axis(arr, kernel: SeparableKernel, axis):
    """Zero-padded correlation along one axis plus the in-domain weight per output."""
    n = arr.shape[axis]
    lo, hi = kernel.u_min, kernel.u_max
    pad = [(0, 0)] * arr.ndim
    pad[axis] = (max(-lo, 0), max(hi, 0))
    padded = np.pad(arr, pad)
    out = np.zeros_like(arr)
    idx = np.arange(n)
    weight = np.zeros(n)
    for u, tap in zip(kernel.offsets, kernel.taps):
        if tap == 0.0:
            continue
        start = u + pad[axis][0]
        sl = [slice(None)] * arr.ndim
        sl[axis] = slice(start, start + n)
        out += tap * padded[tuple(sl)]
        weight += tap * ((idx + u >= 0) & (idx + u < n))
    return out, weight


def _separable_means(u, pairs):
    """Renormalized correlation of ``u`` with each ``(k_x, k_y)`` pair."""
    x_pass = {}
    for kx, _ in pairs:
        if id(kx) not in x_pass:
            x_pass[id(kx)] = _correlate_axis(u, kx, axis=1)
    for kx, ky in pairs:
        num_x, wx = x_pass[id(kx)]
        num, wy = _correlate_axis(num_x, ky, axis=0)
        yield num / np.outer(wy, wx)


def _one_sided_step(u, kernels):
    return _select_closest(u, _separable_means(u, kernels.pairs))


def one_sided_filter(plane, kernels: OneSidedKernelSet, iterations=10):
    """One-sided filter with arbitrary separable weights.

    Weights falling outside the image are dropped and the remaining weights
    rescaled to sum to one.
    """
    iterations = check_iterations(iterations)
    u = check_plane(plane)
    for _ in range(iterations):
        u = _one_sided_step(u, kernels)
    return wrap_like(plane, u)


def gaussian_filter(plane, r, sigma=3.0, iterations=1):
    """Classical (two-sided) Gaussian filter on ``[-r, r]^2``, border-renormalized."""
    k = gaussian_kernel(r, sigma)
    iterations = check_iterations(iterations)
    u = check_plane(plane)
    for _ in range(iterations):
        u = next(_separable_means(u, [(k, k)]))
    return wrap_like(plane, u)


def kernel_spectrum_magnitude(kernel_index, r, grid=64, kernels=None) -> np.ndarray:
    """DFT magnitude of ``k_i - delta`` centered in a ``grid x grid`` field, DC at the center."""
    r = check_radius(r)
    if not 1 <= kernel_index <= 8:
        raise ValueError(f"kernel_index must be in 1..8, got {kernel_index}")
    if grid < 2 * (2 * r + 1):
        raise ValueError(f"grid must be >= {2 * (2 * r + 1)} for r={r}, got {grid}")
    if kernels is None:
        kernels = make_one_sided_kernels(box_kernel(r))
    elif kernels.radius != r:
        raise ValueError("kernel set radius does not match r")
    field = np.zeros((grid, grid))
    c = grid // 2
    field[c - r:c + r + 1, c - r:c + r + 1] = kernels.dense(kernel_index)
    field[c, c] -= 1.0
    return np.abs(np.fft.fftshift(np.fft.fft2(field)))


def kernel_spectrum(kernel_index, r, grid=64, kernels=None) -> ImagePlane:
    """Spectrum magnitude of ``k_i - delta`` rescaled linearly to [0, 1]."""
    mag = kernel_spectrum_magnitude(kernel_index, r, grid, kernels)
    lo, hi = mag.min(), mag.max()
    return ImagePlane.from_array((mag - lo) / (hi - lo))


def apply_filter(plane, config: FilterConfig, n_jobs=None):
    """Run the filter described by ``config`` on a single plane."""
    r, n = config.radius, config.iterations
    if config.variant == "box":
        return box_filter(plane, r, n, n_jobs=n_jobs)
    if config.variant == "osbf-exact":
        return osbf(plane, r, n, n_jobs=n_jobs)
    if config.variant == "osbf-fast":
        return fast_osbf(plane, r, n, n_jobs=n_jobs)
    if config.variant == "one-sided-generic":
        return one_sided_filter(plane, make_one_sided_kernels(gaussian_kernel(r, config.sigma)), n)
    if config.variant == "gaussian":
        return gaussian_filter(plane, r, config.sigma, n)
    raise ValueError(f"unknown variant {config.variant!r}")


def filter_multichannel(img, config: FilterConfig, n_jobs=None):
    """Filter each channel independently.

    Accepts a :class:`MultiChannelImage` or an ``(H, W)`` / ``(H, W, C)`` array
    and returns the same kind.
    """
    if isinstance(img, MultiChannelImage):
        return MultiChannelImage([apply_filter(c, config, n_jobs) for c in img.channels])
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        return apply_filter(arr, config, n_jobs)
    return np.stack([apply_filter(arr[..., c], config, n_jobs) for c in range(arr.shape[2])], axis=-1)
