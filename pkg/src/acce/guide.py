"""Guide image construction by per-channel contrast stretching.

Each RGB channel of the smooth component is linearly stretched between
statistical bounds placed a fixed number of spreads away from the mean,
then the stretched channels are converted to HSI. The guide anchors the
data term of the enhancement solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imagecore import HsiImage, RgbImage, clamp_unit, rgb_to_hsi

__all__ = ["ChannelStats", "channel_stats", "build_guide"]

_DEGENERATE_SPAN = 1e-6


@dataclass(frozen=True)
class ChannelStats:
    """Mean, spread, and the derived stretch bounds of one channel."""

    avg: float
    spread: float
    ut: float
    lt: float


def channel_stats(f: np.ndarray, lam: float, spread: str = "std") -> ChannelStats:
    """Compute stretch bounds avg +/- lam * spread for one plane.

    spread selects the reading of the dispersion statistic: "std"
    (population standard deviation, the default) or "var" (population
    variance, kept for comparison).
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    f = np.asarray(f, dtype=np.float64)
    avg = float(np.mean(f))
    if spread == "std":
        disp = float(np.std(f))
    elif spread == "var":
        disp = float(np.var(f))
    else:
        raise ValueError(f"unknown spread reading {spread!r}")
    return ChannelStats(avg=avg, spread=disp, ut=avg + lam * disp, lt=avg - lam * disp)


def build_guide(f: RgbImage, lam: float, spread: str = "std") -> HsiImage:
    """Stretch each channel between its bounds and convert to HSI.

    A channel whose bounds collapse (span below 1e-6) passes through
    unchanged.
    """
    stretched = []
    for plane in f.planes():
        stats = channel_stats(plane, lam, spread)
        span = stats.ut - stats.lt
        if span < _DEGENERATE_SPAN:
            stretched.append(plane.copy())
        else:
            stretched.append(clamp_unit((plane - stats.lt) / span))
    return rgb_to_hsi(RgbImage(*stretched))
