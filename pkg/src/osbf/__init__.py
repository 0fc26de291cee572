"""Edge- and corner-preserving smoothing with one-sided box filters."""
from .core import (
    SUBWINDOWS,
    FilterConfig,
    ImagePlane,
    MultiChannelImage,
    SeparableKernel,
    SubWindow,
    Volume,
    make_plane,
)
from .estimators import (
    BoxFilter,
    BoxFilter3D,
    FastOneSidedBoxFilter,
    GaussianFilter,
    OneSidedBoxFilter,
    OneSidedBoxFilter3D,
    OneSidedGaussianFilter,
)
from .filters2d import (
    OneSidedKernelSet,
    SubWindowMeans,
    apply_filter,
    box_filter,
    box_kernel,
    fast_osbf,
    filter_multichannel,
    gaussian_filter,
    gaussian_kernel,
    kernel_spectrum,
    make_one_sided_kernels,
    one_sided_filter,
    osbf,
    osbf_step,
    subwindow_means,
)
from .filters3d import SUBREGIONS_3D, box_filter_3d, osbf_3d
from .integral import SummedAreaTable, SummedVolumeTable, build_sat, build_svt, rect_mean, rect_sum
from .metrics import MetricReport, compare, psnr, rmse, ssim

__version__ = "0.1.0"

__all__ = [
    "SUBWINDOWS",
    "FilterConfig",
    "ImagePlane",
    "MultiChannelImage",
    "SeparableKernel",
    "SubWindow",
    "Volume",
    "make_plane",
    "BoxFilter",
    "BoxFilter3D",
    "FastOneSidedBoxFilter",
    "GaussianFilter",
    "OneSidedBoxFilter",
    "OneSidedBoxFilter3D",
    "OneSidedGaussianFilter",
    "OneSidedKernelSet",
    "SubWindowMeans",
    "apply_filter",
    "box_filter",
    "box_kernel",
    "fast_osbf",
    "filter_multichannel",
    "gaussian_filter",
    "gaussian_kernel",
    "kernel_spectrum",
    "make_one_sided_kernels",
    "one_sided_filter",
    "osbf",
    "osbf_step",
    "subwindow_means",
    "SUBREGIONS_3D",
    "box_filter_3d",
    "osbf_3d",
    "SummedAreaTable",
    "SummedVolumeTable",
    "build_sat",
    "build_svt",
    "rect_mean",
    "rect_sum",
    "MetricReport",
    "compare",
    "psnr",
    "rmse",
    "ssim",
]
