"""Adaptive color and contrast enhancement for underwater images.

The pipeline splits an image into a smooth and a detail component,
shrinks noise in the detail, stretches the smooth component into a color
guide, runs a variational contrast solve in HSI space seeded by that
guide, and recombines the parts. See the pipeline module for the
orchestration and the cli module for the command line entry point.
"""

from .decompose import FilterParams, bilateral_filter, dog_filter, gaussian_blur, recombine
from .denoise import ThresholdSpec, estimate_threshold, soft_threshold
from .guide import ChannelStats, build_guide, channel_stats
from .imagecore import (
    HsiImage,
    ImageFormatError,
    RgbImage,
    clamp_unit,
    hsi_to_rgb,
    load_image,
    rgb_to_hsi,
    save_image,
)
from .metrics import MetricReport, mse, psnr, ssim
from .nonlocal_ops import KernelSpec, NonlocalSums, Pyramid, build_pyramid, kernel_weight, naive_sums, pyramid_sums
from .pipeline import BatchSummary, FileResult, PipelineConfig, enhance, run_batch
from .solver import SolverParams, SolverState, energy, solve, solve_state, step

__version__ = "0.1.0"

__all__ = [
    "BatchSummary",
    "ChannelStats",
    "FileResult",
    "FilterParams",
    "HsiImage",
    "ImageFormatError",
    "KernelSpec",
    "MetricReport",
    "NonlocalSums",
    "PipelineConfig",
    "Pyramid",
    "RgbImage",
    "SolverParams",
    "SolverState",
    "ThresholdSpec",
    "bilateral_filter",
    "build_guide",
    "build_pyramid",
    "channel_stats",
    "clamp_unit",
    "dog_filter",
    "energy",
    "enhance",
    "estimate_threshold",
    "gaussian_blur",
    "hsi_to_rgb",
    "kernel_weight",
    "load_image",
    "mse",
    "naive_sums",
    "psnr",
    "pyramid_sums",
    "recombine",
    "rgb_to_hsi",
    "run_batch",
    "save_image",
    "soft_threshold",
    "solve",
    "solve_state",
    "ssim",
    "step",
    "__version__",
]
