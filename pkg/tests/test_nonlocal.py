"""Distance-weighted pairwise sums: exact evaluation and pyramid acceleration."""

import math

import numpy as np
import pytest

from acce.nonlocal_ops import (
    KernelSpec,
    build_pyramid,
    kernel_weight,
    multi_sums,
    naive_sums,
    pyramid_sums,
)


class TestKernelSpec:
    def test_default_is_inverse_distance(self):
        assert KernelSpec().kind == "inverse_distance"

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"kind": "box"},
            {"spatial_sigma": 0.0},
            {"window_radius": 0},
        ],
    )
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            KernelSpec(**kwargs)


class TestKernelWeight:
    def test_origin_is_zero(self):
        assert kernel_weight(KernelSpec(), 0, 0) == 0.0
        assert kernel_weight(KernelSpec(kind="gaussian"), 0, 0) == 0.0

    def test_inverse_distance_values(self):
        spec = KernelSpec()
        assert kernel_weight(spec, 3, 4) == pytest.approx(0.2, abs=1e-15)
        assert kernel_weight(spec, 1, 0) == pytest.approx(1.0, abs=1e-15)
        assert kernel_weight(spec, 1, 1) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)

    def test_gaussian_values(self):
        spec = KernelSpec(kind="gaussian", spatial_sigma=2.0)
        assert kernel_weight(spec, 2, 0) == pytest.approx(math.exp(-0.5), abs=1e-15)
        assert kernel_weight(spec, 0, 2) == kernel_weight(spec, 2, 0)


class TestNaiveSums:
    def test_two_pixel_plane_by_hand(self):
        plane = np.array([[1.0, 0.0]])
        c = np.array([[2.0, 3.0]])
        sums = naive_sums(plane, c, KernelSpec(), scope="global")
        # Unit offset, unit weight: s1(x) = f(x) - f(other).
        assert np.allclose(sums.s1, [[1.0, -1.0]])
        assert np.allclose(sums.s2, [[1.0, 1.0]])
        # sc picks up the coefficient at the *other* pixel.
        assert np.allclose(sums.sc, [[3.0, -2.0]])

    def test_constant_plane_gives_zero_sums(self):
        plane = np.full((7, 7), 0.3)
        sums = naive_sums(plane, np.ones_like(plane), KernelSpec())
        for field in (sums.s1, sums.s2, sums.sc):
            assert np.allclose(field, 0.0, atol=1e-15)

    def test_window_equals_global_when_plane_fits_window(self):
        rng = np.random.default_rng(0)
        plane = rng.random((6, 6))
        c = rng.random((6, 6))
        spec = KernelSpec()  # radius 5 covers a 6x6 plane entirely
        w = naive_sums(plane, c, spec, scope="window")
        g = naive_sums(plane, c, spec, scope="global")
        assert np.array_equal(w.s1, g.s1)
        assert np.array_equal(w.s2, g.s2)
        assert np.array_equal(w.sc, g.sc)

    def test_window_differs_from_global_on_larger_plane(self):
        rng = np.random.default_rng(1)
        plane = rng.random((20, 20))
        c = np.ones_like(plane)
        spec = KernelSpec()
        w = naive_sums(plane, c, spec, scope="window")
        g = naive_sums(plane, c, spec, scope="global")
        assert not np.allclose(w.s1, g.s1)

    def test_s2_nonnegative(self):
        rng = np.random.default_rng(2)
        plane = rng.random((12, 12))
        sums = naive_sums(plane, plane, KernelSpec())
        assert sums.s2.min() >= 0.0

    def test_coefficient_shape_checked(self):
        with pytest.raises(ValueError):
            naive_sums(np.zeros((4, 4)), np.zeros((4, 5)), KernelSpec())

    def test_unknown_scope_rejected(self):
        with pytest.raises(ValueError):
            naive_sums(np.zeros((4, 4)), np.zeros((4, 4)), KernelSpec(), scope="local")

    def test_multi_sums_matches_repeated_single(self):
        rng = np.random.default_rng(3)
        plane = rng.random((9, 9))
        c1, c2 = rng.random((9, 9)), rng.random((9, 9))
        s1, s2, sc1, sc2 = multi_sums(plane, (c1, c2), KernelSpec())
        single1 = naive_sums(plane, c1, KernelSpec())
        single2 = naive_sums(plane, c2, KernelSpec())
        assert np.array_equal(s1, single1.s1)
        assert np.array_equal(s2, single2.s2)
        assert np.array_equal(sc1, single1.sc)
        assert np.array_equal(sc2, single2.sc)


class TestPyramid:
    def test_level_count_for_64(self):
        pyr = build_pyramid((np.zeros((64, 64)),), 5)
        # 64 -> 32 -> 16 -> 8; stop once the min dimension fits one window (11).
        assert len(pyr.levels) == 4
        assert pyr.levels[-1][0].shape == (8, 8)

    def test_small_plane_single_level(self):
        pyr = build_pyramid((np.zeros((10, 10)),), 5)
        assert len(pyr.levels) == 1

    def test_fields_subsampled_jointly(self):
        rng = np.random.default_rng(4)
        a, b = rng.random((32, 32)), rng.random((32, 32))
        pyr = build_pyramid((a, b), 5)
        for level in pyr.levels:
            assert level[0].shape == level[1].shape

    def test_single_level_matches_naive_exactly(self):
        rng = np.random.default_rng(5)
        plane = rng.random((10, 10))
        c = rng.random((10, 10))
        spec = KernelSpec()
        fast = pyramid_sums(plane, c, spec)
        exact = naive_sums(plane, c, spec, scope="window")
        assert np.array_equal(fast.s1, exact.s1)
        assert np.array_equal(fast.s2, exact.s2)
        assert np.array_equal(fast.sc, exact.sc)

    def test_multi_level_tracks_global_sums(self):
        rng = np.random.default_rng(6)
        plane = rng.random((32, 32))
        c = rng.random((32, 32))
        spec = KernelSpec(kind="gaussian", spatial_sigma=2.0, window_radius=8)
        fast = pyramid_sums(plane, c, spec)
        exact = naive_sums(plane, c, spec, scope="global")
        for approx, truth in ((fast.s1, exact.s1), (fast.s2, exact.s2)):
            deviation = np.linalg.norm(approx - truth) / np.linalg.norm(truth)
            assert deviation <= 0.10

    def test_s2_stays_nonnegative(self):
        rng = np.random.default_rng(7)
        plane = rng.random((48, 48))
        fast = pyramid_sums(plane, plane, KernelSpec())
        assert fast.s2.min() >= 0.0
