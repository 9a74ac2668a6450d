"""Fidelity metrics between two unit-range images, and their JSON report.

PSNR uses peak 1.0. SSIM follows the standard Gaussian-windowed form
(11x11 window, sigma 1.5, C1 = 0.01^2, C2 = 0.03^2) computed on the
channel-mean luma by default, mean-pooled over window positions where
the window fits entirely inside the image. A per-channel RGB variant is
available for comparison.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate

from .imagecore import RgbImage

__all__ = ["MetricReport", "mse", "psnr", "ssim"]

_WINDOW = 11
_WINDOW_SIGMA = 1.5
_C1 = 0.01**2
_C2 = 0.03**2


@dataclass(frozen=True)
class MetricReport:
    """Scalar metric triple; psnr_db is +inf for identical inputs."""

    mse: float
    psnr_db: float
    ssim: float

    def to_json(self) -> str:
        psnr_value = "inf" if math.isinf(self.psnr_db) else self.psnr_db
        return json.dumps({"mse": self.mse, "psnr_db": psnr_value, "ssim": self.ssim})


def _check_pair(a: RgbImage, b: RgbImage) -> None:
    if (a.height, a.width) != (b.height, b.width):
        raise ValueError(
            f"image dimensions differ: {a.height}x{a.width} vs {b.height}x{b.width}"
        )


def mse(a: RgbImage, b: RgbImage) -> float:
    """Mean squared error over all channels and pixels."""
    _check_pair(a, b)
    return float(np.mean((a.to_stack() - b.to_stack()) ** 2))


def psnr(a: RgbImage, b: RgbImage) -> float:
    """Peak signal-to-noise ratio in dB against peak 1.0; inf if identical."""
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / err)


def _ssim_window() -> np.ndarray:
    half = _WINDOW // 2
    t = np.arange(-half, half + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2.0 * _WINDOW_SIGMA**2))
    k2d = np.outer(k, k)
    return k2d / k2d.sum()


def _ssim_plane(x: np.ndarray, y: np.ndarray) -> float:
    window = _ssim_window()
    half = _WINDOW // 2
    crop = (slice(half, -half), slice(half, -half))

    def smooth(p: np.ndarray) -> np.ndarray:
        # Interior samples never touch the padding, and only the interior
        # survives the crop, so this equals valid-window filtering.
        return correlate(p, window, mode="constant")[crop]

    mu_x = smooth(x)
    mu_y = smooth(y)
    var_x = np.maximum(smooth(x * x) - mu_x * mu_x, 0.0)
    var_y = np.maximum(smooth(y * y) - mu_y * mu_y, 0.0)
    cov = smooth(x * y) - mu_x * mu_y

    num = (2.0 * mu_x * mu_y + _C1) * (2.0 * cov + _C2)
    den = (mu_x * mu_x + mu_y * mu_y + _C1) * (var_x + var_y + _C2)
    return float(np.mean(num / den))


def ssim(a: RgbImage, b: RgbImage, channels: str = "luma") -> float:
    """Mean structural similarity.

    channels "luma" (default) compares the channel means; "rgb" averages
    the per-channel scores. Requires both image dimensions >= 11.
    """
    _check_pair(a, b)
    if min(a.height, a.width) < _WINDOW:
        raise ValueError(f"ssim needs both dimensions >= {_WINDOW}, got {a.height}x{a.width}")
    if channels == "luma":
        luma_a = (a.r + a.g + a.b) / 3.0
        luma_b = (b.r + b.g + b.b) / 3.0
        return _ssim_plane(luma_a, luma_b)
    if channels == "rgb":
        scores = [_ssim_plane(pa, pb) for pa, pb in zip(a.planes(), b.planes())]
        return float(np.mean(scores))
    raise ValueError(f"unknown channels mode {channels!r}")
