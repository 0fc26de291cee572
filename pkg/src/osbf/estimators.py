"""scikit-learn style wrappers around the filters.

The filters are stateless, so ``fit`` only validates its input and records
the image shape; ``transform`` works without a prior ``fit``. ``X`` is a
single image, ``(height, width)`` or ``(height, width, channels)``, or a
volume ``(depth, height, width)`` for the 3D filters.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .core import FilterConfig
from .filters2d import filter_multichannel
from .filters3d import box_filter_3d, osbf_3d
from .validation import check_image, check_iterations, check_radius, check_volume

__all__ = [
    "BoxFilter",
    "OneSidedBoxFilter",
    "FastOneSidedBoxFilter",
    "OneSidedGaussianFilter",
    "GaussianFilter",
    "BoxFilter3D",
    "OneSidedBoxFilter3D",
]


class _ImageFilter(TransformerMixin, BaseEstimator):
    _variant = None

    def __init__(self, radius=2, iterations=10, n_jobs=None):
        self.radius = radius
        self.iterations = iterations
        self.n_jobs = n_jobs

    def _config(self):
        check_radius(self.radius)
        check_iterations(self.iterations)
        return FilterConfig(radius=self.radius, iterations=self.iterations, variant=self._variant)

    def fit(self, X, y=None):
        X = check_image(X, "X")
        self._config()
        self.image_shape_ = X.shape
        return self

    def transform(self, X):
        X = check_image(X, "X")
        return filter_multichannel(X, self._config(), n_jobs=getattr(self, "n_jobs", None))


class BoxFilter(_ImageFilter):
    """Iterated mean over the full ``(2r+1)^2`` window."""

    _variant = "box"


class OneSidedBoxFilter(_ImageFilter):
    """Edge- and corner-preserving one-sided box filter (exact)."""

    _variant = "osbf-exact"


class FastOneSidedBoxFilter(_ImageFilter):
    """Approximate one-sided box filter from a single quarter-mean field."""

    _variant = "osbf-fast"


class _SigmaFilter(_ImageFilter):
    def __init__(self, radius=2, iterations=10, sigma=3.0):
        self.radius = radius
        self.iterations = iterations
        self.sigma = sigma

    def _config(self):
        check_radius(self.radius)
        check_iterations(self.iterations)
        return FilterConfig(self.radius, self.iterations, self._variant, sigma=self.sigma)


class OneSidedGaussianFilter(_SigmaFilter):
    """One-sided filter with Gaussian weights of width ``sigma``."""

    _variant = "one-sided-generic"


class GaussianFilter(_SigmaFilter):
    _variant = "gaussian"


class _VolumeFilter(TransformerMixin, BaseEstimator):
    def __init__(self, radius=2, iterations=1):
        self.radius = radius
        self.iterations = iterations

    def fit(self, X, y=None):
        X = check_volume(X, "X")
        check_radius(self.radius)
        check_iterations(self.iterations)
        self.volume_shape_ = X.shape
        return self

    def transform(self, X):
        return np.asarray(self._filter(check_volume(X, "X"), self.radius, self.iterations))


class BoxFilter3D(_VolumeFilter):
    _filter = staticmethod(box_filter_3d)


class OneSidedBoxFilter3D(_VolumeFilter):
    """14-region one-sided box filter for volumes."""

    _filter = staticmethod(osbf_3d)
