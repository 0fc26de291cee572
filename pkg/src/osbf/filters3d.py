"""Box and one-sided box filters over volumes.

The one-sided filter in 3D chooses among 14 regions: the 8 octants (one-sided
on every axis) followed by the 6 half windows (one-sided on a single axis).
"""
from __future__ import annotations

import itertools
from typing import NamedTuple


from .filters2d import _select_closest
from .integral import SummedVolumeTable
from .validation import check_iterations, check_radius, check_volume, wrap_like

__all__ = ["SubRegion3D", "SUBREGIONS_3D", "box_filter_3d", "osbf_3d", "osbf_3d_step"]


class SubRegion3D(NamedTuple):
    """Region id plus per-axis offset ranges in units of r, ordered (x, y, z)."""

    id: int
    ranges: tuple

    def offsets(self, r):
        return tuple((lo * r, hi * r) for lo, hi in self.ranges)

    def size(self, r):
        n = 1
        for lo, hi in self.ranges:
            n *= (hi - lo) * r + 1
        return n


def _enumerate_regions():
    sides = ((-1, 0), (0, 1))
    octants = [tuple(reversed(c)) for c in itertools.product(sides, repeat=3)]
    halves = []
    for axis in range(3):
        for side in sides:
            ranges = [(-1, 1)] * 3
            ranges[axis] = side
            halves.append(tuple(ranges))
    return tuple(SubRegion3D(i + 1, rng) for i, rng in enumerate(octants + halves))


SUBREGIONS_3D = _enumerate_regions()


def _box3d_step(v, r):
    svt = SummedVolumeTable(v)
    return svt.window_means(((-r, r),) * 3)


def _osbf3d_step(v, r):
    svt = SummedVolumeTable(v)
    return _select_closest(v, (svt.window_means(reg.offsets(r)) for reg in SUBREGIONS_3D))


def _iterate3d(step, vol, r, iterations):
    r = check_radius(r)
    iterations = check_iterations(iterations)
    v = check_volume(vol)
    for _ in range(iterations):
        v = step(v, r)
    return wrap_like(vol, v)


def box_filter_3d(vol, r, iterations=1):
    """Valid-count mean over the ``(2r+1)^3`` box, iterated."""
    return _iterate3d(_box3d_step, vol, r, iterations)


def osbf_3d_step(vol, r):
    return _iterate3d(_osbf3d_step, vol, r, 1)


def osbf_3d(vol, r, iterations=1):
    """One-sided box filter over a ``(depth, height, width)`` volume or :class:`Volume`.

    Each voxel takes the region mean closest to its value; ties go to the
    lowest region id.
    """
    return _iterate3d(_osbf3d_step, vol, r, iterations)
