"""Frequency decomposition of an image into low and high components.

The low-frequency component is an edge-preserving bilateral smooth of
each channel; the high-frequency component is a difference-of-Gaussians
band-pass of the raw channel. The two are recombined at the end of the
pipeline with a gain on the high component. The split is deliberately
not complementary: the solver only ever sees the smooth component, and
residual detail is reinstated after enhancement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import convolve1d

from .imagecore import RgbImage, clamp_unit

__all__ = ["FilterParams", "gaussian_blur", "bilateral_filter", "dog_filter", "recombine"]


@dataclass(frozen=True)
class FilterParams:
    """Decomposition settings.

    bilateral_spatial_sigma / bilateral_range_sigma / bilateral_radius
    shape the low-frequency smooth; dog_sigma1 < dog_sigma2 shape the
    band-pass; gain scales the high component at recombination.
    """

    bilateral_spatial_sigma: float = 5.0
    bilateral_range_sigma: float = 0.1
    bilateral_radius: int = 7
    dog_sigma1: float = 1.0
    dog_sigma2: float = 1.6
    gain: float = 1.0

    def __post_init__(self) -> None:
        if self.bilateral_spatial_sigma <= 0 or self.bilateral_range_sigma <= 0:
            raise ValueError("bilateral sigmas must be positive")
        if self.bilateral_radius < 1:
            raise ValueError("bilateral_radius must be >= 1")
        if self.dog_sigma1 <= 0 or self.dog_sigma2 <= 0:
            raise ValueError("dog sigmas must be positive")
        if self.dog_sigma2 <= self.dog_sigma1:
            raise ValueError("dog_sigma2 must exceed dog_sigma1")
        if self.gain < 0:
            raise ValueError("gain must be >= 0")


def _gaussian_kernel1d(sigma: float) -> np.ndarray:
    radius = math.ceil(3.0 * sigma)
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(p: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian smooth, kernel truncated at radius ceil(3*sigma).

    Borders are handled by edge replication.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    k = _gaussian_kernel1d(sigma)
    out = convolve1d(np.asarray(p, dtype=np.float64), k, axis=0, mode="nearest")
    return convolve1d(out, k, axis=1, mode="nearest")


def bilateral_filter(p: np.ndarray, params: FilterParams) -> np.ndarray:
    """Edge-preserving smooth: spatial Gaussian times range Gaussian weights.

    Every output sample is a convex combination of window samples, so the
    result stays within the input's value range. Borders replicate edges.
    """
    p = np.asarray(p, dtype=np.float64)
    r = params.bilateral_radius
    inv_2ss = 1.0 / (2.0 * params.bilateral_spatial_sigma**2)
    inv_2rs = 1.0 / (2.0 * params.bilateral_range_sigma**2)

    padded = np.pad(p, r, mode="edge")
    h, w = p.shape
    num = np.zeros_like(p)
    den = np.zeros_like(p)
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            g_spatial = math.exp(-(dx * dx + dy * dy) * inv_2ss)
            q = padded[r + dy : r + dy + h, r + dx : r + dx + w]
            weight = g_spatial * np.exp(-((p - q) ** 2) * inv_2rs)
            num += weight * q
            den += weight
    return num / den


def dog_filter(p: np.ndarray, params: FilterParams) -> np.ndarray:
    """Difference-of-Gaussians band-pass: blur(sigma1) - blur(sigma2)."""
    return gaussian_blur(p, params.dog_sigma1) - gaussian_blur(p, params.dog_sigma2)


def recombine(low: RgbImage, high: tuple[np.ndarray, np.ndarray, np.ndarray], gain: float) -> RgbImage:
    """Merge enhanced low frequencies with the (signed) high residual.

    Each channel is low + gain * high, clamped to [0, 1].
    """
    planes = []
    for lo, hi in zip(low.planes(), high):
        hi = np.asarray(hi, dtype=np.float64)
        if hi.shape != lo.shape:
            raise ValueError(f"component shapes differ: {lo.shape} vs {hi.shape}")
        planes.append(clamp_unit(lo + gain * hi))
    return RgbImage(*planes)
