"""Shared synthetic fixtures for the test suite.

Three image families cover the behaviors under test:

* ``underwater_fixture`` — smooth, low-contrast, blue-green casts with
  independent per-channel color variation.  The canonical input for the
  solver-behavior tests (energy descent, saturation response, range
  safety).
* ``blocks_fixture`` — piecewise-smooth scenes with a few sharp
  rectangles.  Most energy sits in smooth regions, so additive noise
  dominates the detail band; the canonical input for the denoising
  comparison.
* ``degenerate_images`` — constant, black, white, and 1x1 images that
  exercise edge-case handling.

All generators are deterministic in ``seed``.
"""

from __future__ import annotations

import numpy as np

from acce.decompose import gaussian_blur
from acce.imagecore import RgbImage, clamp_unit


def underwater_fixture(seed: int, n: int = 64) -> RgbImage:
    """Smooth low-contrast blue-green scene with per-channel chroma blobs."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:n, 0:n] / (n - 1)
    light = 1.0 - 0.3 * yy + 0.08 * np.sin(2 * np.pi * (xx * rng.uniform(0.5, 1.5) + rng.random()))

    def smooth() -> np.ndarray:
        return gaussian_blur(rng.random((n, n)), 7.0)

    base = light * (0.5 + 0.10 * (smooth() - 0.5))
    r = 0.30 * base + 0.06 * smooth()
    g = 0.55 * base + 0.06 * smooth()
    b = 0.65 * base + 0.06 * smooth()
    clip = lambda p: np.clip(p, 0.02, 0.98)
    return RgbImage(clip(r), clip(g), clip(b))


def blocks_fixture(seed: int, n: int = 64, rects: int = 2) -> RgbImage:
    """Piecewise-smooth scene: gentle gradients plus a few sharp rectangles."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:n, 0:n] / (n - 1)
    base = 0.5 + 0.2 * np.sin(2 * np.pi * xx * rng.uniform(0.6, 1.2)) * (1 - yy)
    for _ in range(rects):
        y0, x0 = rng.integers(8, n - 22, 2)
        hgt, wid = rng.integers(10, 16, 2)
        base[y0:y0 + hgt, x0:x0 + wid] += rng.uniform(0.15, 0.3) * rng.choice([-1, 1])
    base = np.clip(base, 0.05, 0.95)
    blobs = gaussian_blur(rng.random((n, n)), 6.0)
    r = np.clip(0.35 * base + 0.12 * blobs, 0.02, 0.98)
    g = np.clip(0.65 * base + 0.15 * blobs, 0.02, 0.98)
    b = np.clip(0.75 * base + 0.18 * blobs, 0.02, 0.98)
    return RgbImage(r, g, b)


def add_noise(img: RgbImage, sigma: float, seed: int) -> RgbImage:
    """Additive Gaussian noise, clamped back to the unit range."""
    rng = np.random.default_rng(seed)
    return RgbImage(*(clamp_unit(p + sigma * rng.standard_normal(p.shape)) for p in img.planes()))


def degenerate_images() -> dict[str, RgbImage]:
    """Edge-case inputs: constants at several levels and a single pixel."""
    full = lambda v: np.full((16, 16), float(v))
    return {
        "constant": RgbImage(full(0.5), full(0.5), full(0.5)),
        "black": RgbImage(full(0.0), full(0.0), full(0.0)),
        "white": RgbImage(full(1.0), full(1.0), full(1.0)),
        "single_pixel": RgbImage(np.array([[0.3]]), np.array([[0.6]]), np.array([[0.9]])),
    }
