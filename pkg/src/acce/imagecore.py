"""Core image containers, color-space conversions, and file I/O.

All pixel data is float64 in [0, 1]. An image is three 2D planes of
identical shape. Two color spaces are used: RGB for file I/O and the
frequency split, HSI for the enhancement solve. Hue is stored as the
angle divided by 2*pi so every plane shares the same unit range.

Supported file formats are 8-bit PNG (RGB or RGBA, alpha dropped) and
binary PPM (P6, maxval 255).
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

__all__ = [
    "ImageFormatError",
    "RgbImage",
    "HsiImage",
    "as_plane",
    "clamp_unit",
    "rgb_to_hsi",
    "hsi_to_rgb",
    "load_image",
    "save_image",
]

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class ImageFormatError(ValueError):
    """Raised for unreadable or unsupported image file contents."""


def as_plane(values) -> np.ndarray:
    """Coerce array-like data to a 2D float64 plane."""
    p = np.asarray(values, dtype=np.float64)
    if p.ndim != 2:
        raise ValueError(f"plane must be 2D, got shape {p.shape}")
    return p


def clamp_unit(p: np.ndarray) -> np.ndarray:
    """Clamp samples to [0, 1]."""
    return np.clip(p, 0.0, 1.0)


def _check_planes(*planes: np.ndarray) -> None:
    first = planes[0]
    if first.ndim != 2:
        raise ValueError(f"plane must be 2D, got shape {first.shape}")
    if first.size == 0:
        raise ValueError("planes must be non-empty")
    for p in planes[1:]:
        if p.shape != first.shape:
            raise ValueError(f"plane shapes differ: {p.shape} vs {first.shape}")


@dataclass(frozen=True)
class RgbImage:
    """Three aligned unit-range planes: red, green, blue."""

    r: np.ndarray
    g: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        _check_planes(self.r, self.g, self.b)

    @property
    def height(self) -> int:
        return self.r.shape[0]

    @property
    def width(self) -> int:
        return self.r.shape[1]

    def planes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.r, self.g, self.b)

    def to_stack(self) -> np.ndarray:
        """Return an (H, W, 3) array view of the channels."""
        return np.stack(self.planes(), axis=-1)

    @classmethod
    def from_stack(cls, stack) -> "RgbImage":
        arr = np.asarray(stack, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[-1] != 3:
            raise ValueError(f"expected (H, W, 3) stack, got shape {arr.shape}")
        return cls(arr[..., 0].copy(), arr[..., 1].copy(), arr[..., 2].copy())


@dataclass(frozen=True)
class HsiImage:
    """Three aligned unit-range planes: hue (angle / 2*pi), saturation, intensity."""

    h: np.ndarray
    s: np.ndarray
    i: np.ndarray

    def __post_init__(self) -> None:
        _check_planes(self.h, self.s, self.i)

    @property
    def height(self) -> int:
        return self.h.shape[0]

    @property
    def width(self) -> int:
        return self.h.shape[1]

    def planes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.h, self.s, self.i)


def rgb_to_hsi(img: RgbImage) -> HsiImage:
    """Convert RGB planes to HSI.

    Intensity is the channel mean, saturation is 1 - 3*min/sum, and hue
    comes from the arccos chromatic angle, reflected when blue exceeds
    green. Gray and black pixels (zero saturation) take hue 0.
    """
    r, g, b = img.planes()
    total = r + g + b
    i = total / 3.0

    safe_total = np.where(total > 1e-12, total, 1.0)
    minc = np.minimum(np.minimum(r, g), b)
    s = np.where(total > 1e-12, 1.0 - 3.0 * minc / safe_total, 0.0)
    s = np.clip(s, 0.0, 1.0)

    num = 0.5 * ((r - g) + (r - b))
    den = np.sqrt(np.maximum((r - g) ** 2 + (r - b) * (g - b), 0.0))
    chromatic = den > 1e-12
    cos_angle = np.clip(num / np.where(chromatic, den, 1.0), -1.0, 1.0)
    angle = np.arccos(cos_angle)
    angle = np.where(b > g, 2.0 * np.pi - angle, angle)
    h = np.where(chromatic & (s > 0.0), angle / (2.0 * np.pi), 0.0)

    return HsiImage(h=h, s=s, i=np.clip(i, 0.0, 1.0))


def hsi_to_rgb(img: HsiImage) -> RgbImage:
    """Convert HSI planes back to RGB via the three 120-degree sectors.

    Output channels are clamped to [0, 1].
    """
    h, s, i = img.planes()
    angle = np.mod(h, 1.0) * (2.0 * np.pi)

    third = 2.0 * np.pi / 3.0
    sector2 = (angle >= third) & (angle < 2.0 * third)
    sector3 = angle >= 2.0 * third
    local = np.where(sector2, angle - third, np.where(sector3, angle - 2.0 * third, angle))

    # Within a sector the local angle stays in [0, 2*pi/3), so the cosine
    # in the denominator is bounded below by 0.5.
    low = i * (1.0 - s)
    peak = i * (1.0 + s * np.cos(local) / np.cos(np.pi / 3.0 - local))
    rest = 3.0 * i - low - peak

    r = np.where(sector2, low, np.where(sector3, rest, peak))
    g = np.where(sector2, peak, np.where(sector3, low, rest))
    b = np.where(sector2, rest, np.where(sector3, peak, low))

    return RgbImage(r=clamp_unit(r), g=clamp_unit(g), b=clamp_unit(b))


def _bytes_to_image(raw: np.ndarray) -> RgbImage:
    stack = raw.astype(np.float64) / 255.0
    return RgbImage.from_stack(stack)


def _parse_ppm(data: bytes) -> RgbImage:
    # Token scanner honoring '#' comments, as the format allows.
    pos = 2  # past the b"P6" magic
    tokens: list[int] = []
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageFormatError("truncated PPM header")
        try:
            tokens.append(int(data[start:pos]))
        except ValueError as exc:
            raise ImageFormatError(f"bad PPM header token {data[start:pos]!r}") from exc
    width, height, maxval = tokens
    if width <= 0 or height <= 0:
        raise ImageFormatError(f"bad PPM dimensions {width}x{height}")
    if maxval != 255:
        raise ImageFormatError(f"unsupported PPM maxval {maxval}, expected 255")
    pos += 1  # single whitespace byte after maxval
    expected = width * height * 3
    pixels = data[pos : pos + expected]
    if len(pixels) != expected:
        raise ImageFormatError("truncated PPM pixel data")
    raw = np.frombuffer(pixels, dtype=np.uint8).reshape(height, width, 3)
    return _bytes_to_image(raw)


def _parse_png(data: bytes) -> RgbImage:
    if len(data) < 26:
        raise ImageFormatError("truncated PNG header")
    bit_depth = data[24]
    color_type = data[25]
    if bit_depth != 8 or color_type not in (2, 6):
        raise ImageFormatError(
            f"unsupported PNG (bit depth {bit_depth}, color type {color_type}); "
            "only 8-bit RGB/RGBA is accepted"
        )
    try:
        with Image.open(io.BytesIO(data)) as im:
            im.load()
            raw = np.asarray(im, dtype=np.uint8)
    except Exception as exc:
        raise ImageFormatError(f"undecodable PNG: {exc}") from exc
    if raw.ndim != 3 or raw.shape[-1] not in (3, 4):
        raise ImageFormatError(f"unexpected PNG sample layout {raw.shape}")
    return _bytes_to_image(raw[..., :3])


def load_image(path) -> RgbImage:
    """Load a PNG or P6 PPM file, detected by magic bytes.

    Raises OSError if the file cannot be read and ImageFormatError for
    unsupported or malformed contents.
    """
    data = Path(path).read_bytes()
    if data[:2] == b"P6":
        return _parse_ppm(data)
    if data[:8] == _PNG_MAGIC:
        return _parse_png(data)
    head = data[:2]
    if data[:2] in (b"P1", b"P2", b"P3", b"P4", b"P5"):
        raise ImageFormatError(f"unsupported PNM variant {head!r}; only P6 is accepted")
    raise ImageFormatError(f"unrecognized image format (magic {data[:8]!r})")


def quantize_unit(p: np.ndarray) -> np.ndarray:
    """Map unit-range samples to bytes: round(v * 255) with halves rounding up."""
    return np.clip(np.floor(p * 255.0 + 0.5), 0.0, 255.0).astype(np.uint8)


def save_image(img: RgbImage, path) -> None:
    """Write an image as PNG or P6 PPM, chosen by file extension."""
    path = Path(path)
    raw = np.stack([quantize_unit(p) for p in img.planes()], axis=-1)
    suffix = path.suffix.lower()
    if suffix == ".png":
        Image.fromarray(raw, mode="RGB").save(path, format="PNG")
    elif suffix == ".ppm":
        header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
        path.write_bytes(header + raw.tobytes())
    else:
        raise ImageFormatError(f"unsupported output extension {path.suffix!r}; use .png or .ppm")
