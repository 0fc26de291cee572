"""Domain types shared across the package.

Planes are stored as ``(height, width)`` float64 arrays so that the flat
row-major index of ``(x, y)`` is ``y * width + x``. Volumes are stored as
``(depth, height, width)`` arrays, x fastest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "ImagePlane",
    "MultiChannelImage",
    "Volume",
    "SeparableKernel",
    "SubWindow",
    "SUBWINDOWS",
    "FilterConfig",
    "VARIANTS",
    "make_plane",
]


def _as_finite(values, ndim, what):
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if 0 in arr.shape:
        raise ValueError(f"{what} must have every extent >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite samples")
    return arr


class ImagePlane:
    """Single-channel 2D grid of real samples.

    Parameters
    ----------
    width, height : int
        Extents in pixels, both >= 1.
    samples : sequence of float
        Row-major samples, ``len(samples) == width * height``.
    """

    __slots__ = ("_data",)

    def __init__(self, width, height, samples):
        width, height = int(width), int(height)
        if width < 1 or height < 1:
            raise ValueError(f"plane extents must be >= 1, got {width}x{height}")
        flat = np.array(samples, dtype=np.float64).ravel()
        if flat.size != width * height:
            raise ValueError(
                f"expected {width * height} samples for {width}x{height}, got {flat.size}"
            )
        self._data = _as_finite(flat.reshape(height, width), 2, "plane")

    @classmethod
    def from_array(cls, array):
        """Wrap a ``(height, width)`` array (copied)."""
        arr = _as_finite(array, 2, "plane")
        obj = cls.__new__(cls)
        obj._data = arr
        return obj

    @property
    def width(self) -> int:
        return self._data.shape[1]

    @property
    def height(self) -> int:
        return self._data.shape[0]

    @property
    def shape(self):
        return self._data.shape

    @property
    def samples(self) -> np.ndarray:
        """Flat row-major view of the samples (read-only)."""
        view = self._data.ravel()
        view.flags.writeable = False
        return view

    def to_array(self) -> np.ndarray:
        return self._data.copy()

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data.copy()
        return self._data.astype(dtype)

    def _check_index(self, x, y):
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise IndexError(f"({x}, {y}) outside {self.width}x{self.height} plane")

    def get(self, x: int, y: int) -> float:
        self._check_index(x, y)
        return float(self._data[y, x])

    def set(self, x: int, y: int, value: float) -> None:
        self._check_index(x, y)
        if not math.isfinite(value):
            raise ValueError("sample values must be finite")
        self._data[y, x] = value

    def __eq__(self, other):
        if not isinstance(other, ImagePlane):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __repr__(self):
        return f"ImagePlane(width={self.width}, height={self.height})"


def make_plane(width: int, height: int, fill: float = 0.0) -> ImagePlane:
    """Plane of the given size with every sample equal to ``fill``."""
    if width < 1 or height < 1:
        raise ValueError(f"plane extents must be >= 1, got {width}x{height}")
    if not math.isfinite(fill):
        raise ValueError("fill must be finite")
    return ImagePlane.from_array(np.full((height, width), float(fill)))


class MultiChannelImage:
    """Ordered list of 1 to 4 planes sharing the same extents."""

    __slots__ = ("channels",)

    def __init__(self, channels: Sequence[ImagePlane]):
        channels = [c if isinstance(c, ImagePlane) else ImagePlane.from_array(c) for c in channels]
        if not 1 <= len(channels) <= 4:
            raise ValueError(f"channel count must be 1..4, got {len(channels)}")
        shapes = {c.shape for c in channels}
        if len(shapes) != 1:
            raise ValueError(f"channels differ in size: {sorted(shapes)}")
        self.channels = list(channels)

    @classmethod
    def from_array(cls, array):
        """Build from ``(height, width)`` or ``(height, width, channels)``."""
        arr = np.asarray(array, dtype=np.float64)
        if arr.ndim == 2:
            return cls([ImagePlane.from_array(arr)])
        if arr.ndim != 3:
            raise ValueError(f"expected a 2D or 3D array, got shape {arr.shape}")
        return cls([ImagePlane.from_array(arr[..., c]) for c in range(arr.shape[2])])

    def to_array(self) -> np.ndarray:
        """Stack as ``(height, width, channels)``."""
        return np.stack([c.to_array() for c in self.channels], axis=-1)

    @property
    def width(self):
        return self.channels[0].width

    @property
    def height(self):
        return self.channels[0].height

    def __len__(self):
        return len(self.channels)

    def __eq__(self, other):
        if not isinstance(other, MultiChannelImage):
            return NotImplemented
        return len(self) == len(other) and all(a == b for a, b in zip(self.channels, other.channels))


class Volume:
    """Single-channel 3D grid of real samples, x-fastest."""

    __slots__ = ("_data",)

    def __init__(self, width, height, depth, samples):
        width, height, depth = int(width), int(height), int(depth)
        if min(width, height, depth) < 1:
            raise ValueError(f"volume extents must be >= 1, got {width}x{height}x{depth}")
        flat = np.array(samples, dtype=np.float64).ravel()
        if flat.size != width * height * depth:
            raise ValueError(
                f"expected {width * height * depth} samples, got {flat.size}"
            )
        self._data = _as_finite(flat.reshape(depth, height, width), 3, "volume")

    @classmethod
    def from_array(cls, array):
        """Wrap a ``(depth, height, width)`` array (copied)."""
        obj = cls.__new__(cls)
        obj._data = _as_finite(array, 3, "volume")
        return obj

    @property
    def width(self):
        return self._data.shape[2]

    @property
    def height(self):
        return self._data.shape[1]

    @property
    def depth(self):
        return self._data.shape[0]

    @property
    def shape(self):
        return self._data.shape

    @property
    def samples(self):
        view = self._data.ravel()
        view.flags.writeable = False
        return view

    def to_array(self):
        return self._data.copy()

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data.copy()
        return self._data.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Volume):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __repr__(self):
        return f"Volume(width={self.width}, height={self.height}, depth={self.depth})"


@dataclass(frozen=True)
class SeparableKernel:
    """1D tap vector over offsets ``u_min .. u_min + len(taps) - 1``.

    Taps are normalized to sum to one on construction.
    """

    taps: tuple
    u_min: int

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.float64).ravel()
        if taps.size == 0:
            raise ValueError("kernel needs at least one tap")
        if not np.all(np.isfinite(taps)) or np.any(taps < 0):
            raise ValueError("kernel taps must be finite and non-negative")
        total = taps.sum()
        if total <= 0:
            raise ValueError("kernel taps sum to zero and cannot be normalized")
        if self.u_min > 0 or self.u_min + taps.size - 1 < 0:
            raise ValueError("kernel support must contain offset 0")
        object.__setattr__(self, "taps", tuple(float(t) for t in taps / total))

    @property
    def u_max(self) -> int:
        return self.u_min + len(self.taps) - 1

    @property
    def offsets(self) -> range:
        return range(self.u_min, self.u_max + 1)

    def as_array(self) -> np.ndarray:
        return np.array(self.taps)

    def restrict(self, lo: int, hi: int) -> "SeparableKernel":
        """Keep the taps with ``lo <= u <= hi`` and renormalize."""
        lo, hi = max(lo, self.u_min), min(hi, self.u_max)
        taps = self.as_array()[lo - self.u_min: hi - self.u_min + 1]
        if taps.size == 0 or taps.sum() <= 0:
            raise ValueError(f"kernel has no weight on offsets [{lo}, {hi}]")
        return SeparableKernel(tuple(taps), lo)


class SubWindow(NamedTuple):
    """One-sided sub-window as inclusive offset ranges scaled by the radius.

    ``(u_lo, u_hi)`` and ``(v_lo, v_hi)`` are multiples of r in {-1, 0, 1};
    the window around ``(x, y)`` covers ``x + u_lo*r .. x + u_hi*r`` and
    ``y + v_lo*r .. y + v_hi*r``.
    """

    id: int
    u_lo: int
    u_hi: int
    v_lo: int
    v_hi: int

    @property
    def is_quarter(self) -> bool:
        return self.id <= 4

    def offsets(self, r: int):
        return self.u_lo * r, self.u_hi * r, self.v_lo * r, self.v_hi * r

    def size(self, r: int) -> int:
        return ((self.u_hi - self.u_lo) * r + 1) * ((self.v_hi - self.v_lo) * r + 1)


# ids 1-4 are quarter windows, 5-8 half windows; this order is also the tie-break order
SUBWINDOWS = (
    SubWindow(1, -1, 0, 0, 1),
    SubWindow(2, 0, 1, 0, 1),
    SubWindow(3, 0, 1, -1, 0),
    SubWindow(4, -1, 0, -1, 0),
    SubWindow(5, -1, 0, -1, 1),
    SubWindow(6, 0, 1, -1, 1),
    SubWindow(7, -1, 1, 0, 1),
    SubWindow(8, -1, 1, -1, 0),
)

VARIANTS = ("box", "osbf-exact", "osbf-fast", "one-sided-generic", "gaussian")


@dataclass(frozen=True)
class FilterConfig:
    """Knobs for every filter variant.

    ``sigma`` is only consulted by the Gaussian-weighted variants.
    """

    radius: int = 2
    iterations: int = 10
    variant: str = "osbf-exact"
    sigma: float = 3.0
    boundary: str = field(default="valid-count")

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if int(self.radius) != self.radius or self.radius < 1:
            raise ValueError(f"radius must be an integer >= 1, got {self.radius}")
        if int(self.iterations) != self.iterations or self.iterations < 0:
            raise ValueError(f"iterations must be an integer >= 0, got {self.iterations}")
        if self.variant in ("one-sided-generic", "gaussian") and not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.boundary != "valid-count":
            raise ValueError("only valid-count boundary handling is supported")
