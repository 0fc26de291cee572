"""Summed-area and summed-volume tables.

Both tables carry a zero border so that the sum over any clipped box costs a
fixed number of lookups regardless of its size.
"""
from __future__ import annotations

import numpy as np

from .validation import check_plane, check_volume

__all__ = [
    "SummedAreaTable",
    "SummedVolumeTable",
    "build_sat",
    "build_svt",
    "rect_sum",
    "rect_mean",
    "box_sum_3d",
    "box_mean_3d",
]


def _prefix_sums(arr):
    table = np.zeros(tuple(n + 1 for n in arr.shape), dtype=np.float64)
    inner = arr.astype(np.float64, copy=True)
    for axis in range(arr.ndim):
        np.cumsum(inner, axis=axis, out=inner)
    table[(slice(1, None),) * arr.ndim] = inner
    return table


def _clip_interval(lo, hi, n):
    lo, hi = max(int(lo), 0), min(int(hi), n - 1)
    return lo, hi


class SummedAreaTable:
    """Prefix sums of a plane.

    ``table[y, x]`` holds the sum of the source over ``[0, x) x [0, y)``;
    row 0 and column 0 are zero.
    """

    def __init__(self, plane):
        arr = check_plane(plane)
        self.height, self.width = arr.shape
        self.table = _prefix_sums(arr)
        self.table.flags.writeable = False
        self._padded = {}

    @property
    def total(self) -> float:
        return float(self.table[-1, -1])

    def rect_sum(self, x0, y0, x1, y1) -> float:
        """Sum over the inclusive rectangle ``[x0, x1] x [y0, y1]`` clipped to the image."""
        if x0 > x1 or y0 > y1:
            raise ValueError("rectangle corners must satisfy x0 <= x1 and y0 <= y1")
        x0, x1 = _clip_interval(x0, x1, self.width)
        y0, y1 = _clip_interval(y0, y1, self.height)
        if x0 > x1 or y0 > y1:
            return 0.0
        t = self.table
        return float(t[y1 + 1, x1 + 1] - t[y0, x1 + 1] - t[y1 + 1, x0] + t[y0, x0])

    def rect_count(self, x0, y0, x1, y1) -> int:
        x0, x1 = _clip_interval(x0, x1, self.width)
        y0, y1 = _clip_interval(y0, y1, self.height)
        return max(x1 - x0 + 1, 0) * max(y1 - y0 + 1, 0)

    def rect_mean(self, x0, y0, x1, y1) -> float:
        """Mean over the in-domain pixels of the rectangle."""
        count = self.rect_count(x0, y0, x1, y1) if x0 <= x1 and y0 <= y1 else 0
        if count == 0:
            raise ValueError(f"rectangle ({x0},{y0})-({x1},{y1}) does not intersect the image")
        return self.rect_sum(x0, y0, x1, y1) / count

    def padded(self, pad):
        """Table extended by ``pad`` edge-replicated cells on every side (cached).

        ``padded(p)[j + p, i + p] == table[clip(j), clip(i)]``, which turns
        clipped corner lookups into plain slices.
        """
        cached = self._padded.get(pad)
        if cached is None:
            cached = np.pad(self.table, pad, mode="edge")
            self._padded = {pad: cached}
        return cached

    def window_means(self, du0, du1, dv0, dv1, rows=None):
        """Valid-count mean of ``[x+du0, x+du1] x [y+dv0, y+dv1]`` for every pixel.

        Offsets must bracket zero so that every clipped window is non-empty.
        ``rows`` optionally restricts the output to a ``(start, stop)`` row band.
        """
        if not (du0 <= 0 <= du1 and dv0 <= 0 <= dv1):
            raise ValueError("window offsets must bracket the center pixel")
        y_start, y_stop = (0, self.height) if rows is None else rows
        w, h = self.width, self.height
        p = max(-du0, du1, -dv0, dv1) + 1
        t = self.padded(p)
        xa, xb = slice(p + du0, p + du0 + w), slice(p + du1 + 1, p + du1 + 1 + w)
        ya = slice(p + dv0 + y_start, p + dv0 + y_stop)
        yb = slice(p + dv1 + 1 + y_start, p + dv1 + 1 + y_stop)
        total = t[yb, xb] - t[ya, xb] - t[yb, xa] + t[ya, xa]
        return total / _counts(w, h, du0, du1, dv0, dv1, y_start, y_stop)


def _counts(w, h, du0, du1, dv0, dv1, y_start=0, y_stop=None):
    y_stop = h if y_stop is None else y_stop
    xs = np.arange(w)
    ys = np.arange(y_start, y_stop)
    nx = np.minimum(xs + du1, w - 1) - np.maximum(xs + du0, 0) + 1
    ny = np.minimum(ys + dv1, h - 1) - np.maximum(ys + dv0, 0) + 1
    return np.outer(ny, nx).astype(np.float64)


class SummedVolumeTable:
    """3D prefix sums; ``table[z, y, x]`` sums the source over ``[0,x) x [0,y) x [0,z)``."""

    def __init__(self, volume):
        arr = check_volume(volume)
        self.depth, self.height, self.width = arr.shape
        self.table = _prefix_sums(arr)
        self.table.flags.writeable = False

    @property
    def total(self) -> float:
        return float(self.table[-1, -1, -1])

    def _clipped(self, region):
        x0, y0, z0, x1, y1, z1 = region
        if x0 > x1 or y0 > y1 or z0 > z1:
            raise ValueError("box corners must satisfy lo <= hi on every axis")
        x0, x1 = _clip_interval(x0, x1, self.width)
        y0, y1 = _clip_interval(y0, y1, self.height)
        z0, z1 = _clip_interval(z0, z1, self.depth)
        return x0, y0, z0, x1, y1, z1

    def box_sum(self, region) -> float:
        """Sum over the inclusive box ``(x0, y0, z0, x1, y1, z1)`` clipped to the volume."""
        x0, y0, z0, x1, y1, z1 = self._clipped(region)
        if x0 > x1 or y0 > y1 or z0 > z1:
            return 0.0
        t = self.table
        x1, y1, z1 = x1 + 1, y1 + 1, z1 + 1
        return float(
            t[z1, y1, x1] - t[z0, y1, x1] - t[z1, y0, x1] - t[z1, y1, x0]
            + t[z0, y0, x1] + t[z0, y1, x0] + t[z1, y0, x0] - t[z0, y0, x0]
        )

    def box_mean(self, region) -> float:
        x0, y0, z0, x1, y1, z1 = self._clipped(region)
        count = max(x1 - x0 + 1, 0) * max(y1 - y0 + 1, 0) * max(z1 - z0 + 1, 0)
        if count == 0:
            raise ValueError(f"box {tuple(region)} does not intersect the volume")
        return self.box_sum(region) / count

    def window_means(self, offsets):
        """Valid-count mean over ``x+dx0..x+dx1`` (and likewise y, z) for every voxel.

        ``offsets`` is ``((dx0, dx1), (dy0, dy1), (dz0, dz1))``, each bracketing zero.
        """
        t = self.table
        ends = []
        for n, (d0, d1) in zip((self.width, self.height, self.depth), offsets):
            idx = np.arange(n)
            ends.append((np.clip(idx + d0, 0, n), np.clip(idx + d1 + 1, 0, n)))
        (xa, xb), (ya, yb), (za, zb) = ends
        total = np.zeros((self.depth, self.height, self.width))
        for zi, zs in ((zb, 1), (za, -1)):
            for yi, ys in ((yb, 1), (ya, -1)):
                for xi, xs in ((xb, 1), (xa, -1)):
                    total += (zs * ys * xs) * t[np.ix_(zi, yi, xi)]
        count = (zb - za)[:, None, None] * (yb - ya)[None, :, None] * (xb - xa)[None, None, :]
        return total / count


def build_sat(plane) -> SummedAreaTable:
    return SummedAreaTable(plane)


def build_svt(volume) -> SummedVolumeTable:
    return SummedVolumeTable(volume)


def rect_sum(sat: SummedAreaTable, x0, y0, x1, y1) -> float:
    return sat.rect_sum(x0, y0, x1, y1)


def rect_mean(sat: SummedAreaTable, x0, y0, x1, y1) -> float:
    return sat.rect_mean(x0, y0, x1, y1)


def box_sum_3d(svt: SummedVolumeTable, region) -> float:
    return svt.box_sum(region)


def box_mean_3d(svt: SummedVolumeTable, region) -> float:
    return svt.box_mean(region)
