"""Color model containers, HSI conversion, and image file IO."""

import io

import numpy as np
import pytest
from PIL import Image

from acce.imagecore import (
    HsiImage,
    ImageFormatError,
    RgbImage,
    clamp_unit,
    hsi_to_rgb,
    load_image,
    quantize_unit,
    rgb_to_hsi,
    save_image,
)


def _solid(r, g, b, shape=(4, 4)):
    return RgbImage(np.full(shape, r), np.full(shape, g), np.full(shape, b))


class TestContainers:
    def test_rgb_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            RgbImage(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))

    def test_rgb_requires_two_dims(self):
        with pytest.raises(ValueError):
            RgbImage(np.zeros(4), np.zeros(4), np.zeros(4))

    def test_hsi_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            HsiImage(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((3, 2)))

    def test_stack_roundtrip(self):
        rng = np.random.default_rng(0)
        img = RgbImage(*(rng.random((3, 5)) for _ in range(3)))
        back = RgbImage.from_stack(img.to_stack())
        for a, b in zip(img.planes(), back.planes()):
            assert np.array_equal(a, b)

    def test_dimensions(self):
        img = _solid(0.1, 0.2, 0.3, shape=(2, 7))
        assert img.height == 2 and img.width == 7

    def test_clamp_unit(self):
        p = np.array([-0.5, 0.0, 0.3, 1.0, 1.7])
        assert np.array_equal(clamp_unit(p), np.array([0.0, 0.0, 0.3, 1.0, 1.0]))


class TestHsiConversion:
    def test_pure_red(self):
        hsi = rgb_to_hsi(_solid(1.0, 0.0, 0.0))
        assert np.allclose(hsi.h, 0.0, atol=1e-12)
        assert np.allclose(hsi.s, 1.0, atol=1e-12)
        assert np.allclose(hsi.i, 1.0 / 3.0, atol=1e-12)

    def test_gray_has_zero_hue_and_saturation(self):
        hsi = rgb_to_hsi(_solid(0.4, 0.4, 0.4))
        assert np.allclose(hsi.h, 0.0)
        assert np.allclose(hsi.s, 0.0)
        assert np.allclose(hsi.i, 0.4)

    def test_black_is_all_zero(self):
        hsi = rgb_to_hsi(_solid(0.0, 0.0, 0.0))
        for plane in hsi.planes():
            assert np.allclose(plane, 0.0)

    def test_blue_hue_uses_reflected_sector(self):
        # Blue-dominant colors land in the upper half of the hue circle.
        hsi = rgb_to_hsi(_solid(0.1, 0.2, 0.9))
        assert float(hsi.h[0, 0]) > 0.5

    def test_roundtrip_random(self):
        rng = np.random.default_rng(42)
        img = RgbImage(*(rng.random((32, 32)) for _ in range(3)))
        back = hsi_to_rgb(rgb_to_hsi(img))
        for a, b in zip(img.planes(), back.planes()):
            assert np.abs(a - b).max() <= 1e-9

    def test_outputs_stay_in_unit_range(self):
        rng = np.random.default_rng(3)
        hsi = HsiImage(rng.random((8, 8)), rng.random((8, 8)), rng.random((8, 8)))
        rgb = hsi_to_rgb(hsi)
        for plane in rgb.planes():
            assert plane.min() >= 0.0 and plane.max() <= 1.0


class TestQuantize:
    def test_endpoints(self):
        assert quantize_unit(np.array([0.0]))[0] == 0
        assert quantize_unit(np.array([1.0]))[0] == 255

    def test_halves_round_up(self):
        # 0.5/255 sits exactly between 0 and 1; the quantizer rounds up.
        assert quantize_unit(np.array([0.5 / 255.0]))[0] == 1

    def test_out_of_range_clamped(self):
        assert quantize_unit(np.array([-0.2]))[0] == 0
        assert quantize_unit(np.array([1.4]))[0] == 255


class TestFileIO:
    def _random_image(self, seed=5, shape=(6, 9)):
        rng = np.random.default_rng(seed)
        return RgbImage(*(rng.random(shape) for _ in range(3)))

    def test_png_roundtrip_is_exact_after_quantization(self, tmp_path):
        img = self._random_image()
        path = tmp_path / "img.png"
        save_image(img, path)
        back = load_image(path)
        for orig, loaded in zip(img.planes(), back.planes()):
            assert np.array_equal(quantize_unit(orig), quantize_unit(loaded))

    def test_ppm_roundtrip_is_exact_after_quantization(self, tmp_path):
        img = self._random_image(seed=6)
        path = tmp_path / "img.ppm"
        save_image(img, path)
        back = load_image(path)
        for orig, loaded in zip(img.planes(), back.planes()):
            assert np.array_equal(quantize_unit(orig), quantize_unit(loaded))

    def test_format_detected_by_magic_not_extension(self, tmp_path):
        img = self._random_image(seed=7)
        path = tmp_path / "actually_png.ppm"
        save_image(img, tmp_path / "tmp.png")
        path.write_bytes((tmp_path / "tmp.png").read_bytes())
        back = load_image(path)
        assert back.height == img.height

    def test_ppm_header_comments(self, tmp_path):
        payload = bytes([10, 20, 30, 40, 50, 60])
        data = b"P6\n# a comment\n2 1\n# another\n255\n" + payload
        path = tmp_path / "c.ppm"
        path.write_bytes(data)
        img = load_image(path)
        assert img.width == 2 and img.height == 1
        assert quantize_unit(img.r)[0, 0] == 10

    def test_ppm_wide_maxval_rejected(self, tmp_path):
        path = tmp_path / "wide.ppm"
        path.write_bytes(b"P6\n1 1\n65535\n\x00\x00\x00\x00\x00\x00")
        with pytest.raises(ImageFormatError):
            load_image(path)

    def test_ppm_truncated_pixels_rejected(self, tmp_path):
        path = tmp_path / "short.ppm"
        path.write_bytes(b"P6\n2 2\n255\n\x00\x00\x00")
        with pytest.raises(ImageFormatError):
            load_image(path)

    def test_other_pnm_variants_rejected(self, tmp_path):
        path = tmp_path / "gray.pgm"
        path.write_bytes(b"P5\n1 1\n255\n\x00")
        with pytest.raises(ImageFormatError):
            load_image(path)

    def test_sixteen_bit_png_rejected(self, tmp_path):
        deep = Image.new("I;16", (4, 4))
        deep.putdata([i * 4000 for i in range(16)])
        buffer = io.BytesIO()
        deep.save(buffer, format="PNG")
        path = tmp_path / "deep.png"
        path.write_bytes(buffer.getvalue())
        with pytest.raises(ImageFormatError):
            load_image(path)

    def test_png_alpha_channel_dropped(self, tmp_path):
        rgba = np.zeros((3, 3, 4), dtype=np.uint8)
        rgba[..., 0] = 200
        rgba[..., 3] = 128
        path = tmp_path / "alpha.png"
        Image.fromarray(rgba, mode="RGBA").save(path)
        img = load_image(path)
        assert np.allclose(img.r, 200 / 255.0)
        assert np.allclose(img.g, 0.0)

    def test_unrecognized_magic_rejected(self, tmp_path):
        path = tmp_path / "junk.png"
        path.write_bytes(b"not an image at all")
        with pytest.raises(ImageFormatError):
            load_image(path)

    def test_unknown_save_extension_rejected(self, tmp_path):
        with pytest.raises(ImageFormatError):
            save_image(self._random_image(), tmp_path / "img.bmp")

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_image(tmp_path / "absent.png")
