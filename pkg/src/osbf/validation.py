"""Input validation helpers used by the filter functions and estimators."""
from __future__ import annotations

import numbers

import numpy as np

from .core import ImagePlane, Volume


def check_plane(X, name="plane"):
    """Return ``X`` as a finite float64 ``(height, width)`` array.

    Accepts an :class:`ImagePlane` or anything ``np.asarray`` understands.
    """
    if isinstance(X, ImagePlane):
        return X.to_array()
    arr = np.array(X, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if 0 in arr.shape:
        raise ValueError(f"{name} is empty: shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite samples")
    return arr


def check_image(X, name="image"):
    """Return ``X`` as ``(height, width)`` or ``(height, width, channels)``, channels <= 4."""
    arr = np.array(X, dtype=np.float64)
    if arr.ndim == 2:
        return check_plane(arr, name)
    if arr.ndim != 3 or not 1 <= arr.shape[2] <= 4:
        raise ValueError(f"{name} must be (H, W) or (H, W, C) with 1 <= C <= 4, got {arr.shape}")
    if 0 in arr.shape or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be non-empty and finite")
    return arr


def check_volume(X, name="volume"):
    if isinstance(X, Volume):
        return X.to_array()
    arr = np.array(X, dtype=np.float64)
    if arr.ndim != 3:
        raise ValueError(f"{name} must be 3-dimensional, got shape {arr.shape}")
    if 0 in arr.shape:
        raise ValueError(f"{name} is empty: shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite samples")
    return arr


def check_radius(r):
    if not isinstance(r, numbers.Integral) or isinstance(r, bool) or r < 1:
        raise ValueError(f"radius must be an integer >= 1, got {r!r}")
    return int(r)


def check_iterations(n):
    if not isinstance(n, numbers.Integral) or isinstance(n, bool) or n < 0:
        raise ValueError(f"iterations must be an integer >= 0, got {n!r}")
    return int(n)


def wrap_like(template, arr):
    """Return ``arr`` wrapped in the container type of ``template``."""
    if isinstance(template, ImagePlane):
        return ImagePlane.from_array(arr)
    if isinstance(template, Volume):
        return Volume.from_array(arr)
    return arr
