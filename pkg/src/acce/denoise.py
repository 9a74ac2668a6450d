"""Soft-threshold shrinkage of the high-frequency residual.

The threshold either comes from the universal rule, with the noise scale
estimated from the median absolute residual, or is supplied as a fixed
value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ThresholdSpec", "estimate_threshold", "soft_threshold"]


@dataclass(frozen=True)
class ThresholdSpec:
    """Threshold selection: mode "auto" (universal rule) or "fixed"."""

    mode: str = "auto"
    value: float = 0.0

    def __post_init__(self) -> None:
        if self.mode not in ("auto", "fixed"):
            raise ValueError(f"unknown threshold mode {self.mode!r}")
        if self.value < 0:
            raise ValueError("threshold value must be >= 0")

    def resolve(self, residual: np.ndarray) -> float:
        if self.mode == "fixed":
            return self.value
        return estimate_threshold(residual)


def estimate_threshold(residual: np.ndarray) -> float:
    """Universal threshold: (median|r| / 0.6745) * sqrt(2 ln N)."""
    residual = np.asarray(residual, dtype=np.float64)
    n = residual.size
    if n == 0:
        raise ValueError("residual must be non-empty")
    scale = float(np.median(np.abs(residual))) / 0.6745
    return scale * math.sqrt(2.0 * math.log(n))


def soft_threshold(residual: np.ndarray, threshold: float) -> np.ndarray:
    """Shrink values toward zero: sign(r) * max(|r| - threshold, 0)."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    residual = np.asarray(residual, dtype=np.float64)
    return np.sign(residual) * np.maximum(np.abs(residual) - threshold, 0.0)
