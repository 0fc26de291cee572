import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import WINDOWS, naive_osbf_step, naive_window_mean, shifted_osbf_step, shifted_window_means
from osbf.core import FilterConfig, ImagePlane, MultiChannelImage
from osbf.filters2d import (
    _quarter_field,
    apply_filter,
    box_filter,
    box_kernel,
    fast_osbf,
    fast_osbf_step,
    filter_multichannel,
    gaussian_filter,
    gaussian_kernel,
    make_one_sided_kernels,
    one_sided_filter,
    osbf,
    osbf_step,
    subwindow_means,
)
from osbf.integral import build_sat
from osbf.synth import checkerboard, phantom, step

planes = arrays(
    np.float64,
    st.tuples(st.integers(1, 9), st.integers(1, 9)),
    elements=st.floats(0, 255, allow_nan=False),
)


class TestBoxFilter:
    def test_single_bright_pixel(self):
        a = np.zeros((5, 5))
        a[2, 2] = 25.0
        out = box_filter(a, 1)
        want = np.zeros((5, 5))
        want[1:4, 1:4] = 25.0 / 9
        np.testing.assert_allclose(out, want, atol=1e-12)

    def test_matches_shifted_sum(self):
        a = np.random.default_rng(0).random((17, 23))
        np.testing.assert_allclose(box_filter(a, 3), shifted_window_means(a, (-3, 3), (-3, 3)), atol=1e-12)

    def test_constant_is_fixed(self):
        np.testing.assert_allclose(box_filter(np.full((8, 8), 4.0), 2, 5), 4.0, atol=1e-12)

    def test_zero_iterations_copies(self):
        a = np.arange(12.0).reshape(3, 4)
        out = box_filter(a, 1, 0)
        np.testing.assert_array_equal(out, a)
        assert out is not a


class TestSubwindowMeans:
    def test_center_pixel_of_ramp(self):
        a = np.arange(49.0).reshape(7, 7)
        m = subwindow_means(build_sat(a), 3, 3, 2)
        for i, got in enumerate(m, start=1):
            du, dv = WINDOWS[i](2)
            assert got == pytest.approx(naive_window_mean(a, 3, 3, du, dv), abs=1e-12)

    def test_corner_pixel_clips(self):
        a = np.random.default_rng(1).random((6, 6))
        m = subwindow_means(build_sat(a), 0, 0, 3)
        # window 4 lies entirely up-left of the corner; only the pixel itself remains
        assert m.a4 == a[0, 0]
        assert m.a2 == pytest.approx(a[0:4, 0:4].mean(), abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            subwindow_means(build_sat(np.ones((3, 3))), 3, 0, 1)


class TestExactOSBF:
    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_step_matches_per_pixel_loop(self, r):
        a = np.random.default_rng(r).integers(0, 256, (12, 10)).astype(float)
        np.testing.assert_allclose(osbf_step(a, r), naive_osbf_step(a, r), atol=1e-9)

    def test_step_matches_shifted_oracle(self):
        a = np.random.default_rng(9).random((40, 33)) * 255
        np.testing.assert_allclose(osbf_step(a, 4), shifted_osbf_step(a, 4), atol=1e-9)

    def test_tie_goes_to_smallest_id(self):
        # left half 0, right half 2, center column 1: windows 1 and 2 are equally
        # far from the center value at most pixels; window 1 (left) must win
        a = np.zeros((5, 5))
        a[:, 2] = 1.0
        a[:, 3:] = 2.0
        out = osbf_step(a, 1)
        assert out[0, 2] == naive_osbf_step(a, 1)[0, 2]
        np.testing.assert_array_equal(out, naive_osbf_step(a, 1))

    def test_iterations_compose(self):
        a = np.random.default_rng(3).random((15, 15))
        twice = osbf_step(osbf_step(a, 2), 2)
        np.testing.assert_allclose(osbf(a, 2, 2), twice, atol=1e-12)

    def test_jacobi_not_gauss_seidel(self):
        # an in-place sweep would feed updated neighbors into later pixels
        a = np.random.default_rng(4).random((9, 9))
        np.testing.assert_allclose(osbf(a, 1, 1), naive_osbf_step(a, 1), atol=1e-12)

    @pytest.mark.parametrize("r", [1, 2, 3, 5])
    def test_checkerboard_fixed_when_cell_at_least_2r(self, r):
        img = checkerboard(40, 40, 2 * r)
        out = osbf(img, r, 1)
        np.testing.assert_allclose(out.to_array(), img.to_array(), atol=1e-6)

    def test_checkerboard_cell_r_plus_1_not_fixed(self):
        # counterexample: cell r+1 < 2r leaves interior pixels with no uniform window
        img = checkerboard(24, 24, 3)
        out = osbf(img, 4, 1)
        assert np.abs(out.to_array() - img.to_array()).max() > 1.0

    def test_step_edge_preserved(self):
        img = step(32, 16, 13)
        out = osbf(img, 3, 20)
        np.testing.assert_allclose(out.to_array(), img.to_array(), atol=1e-6)

    def test_keeps_container_type(self):
        assert isinstance(osbf(ImagePlane.from_array(np.ones((4, 4))), 1, 1), ImagePlane)
        assert isinstance(osbf(np.ones((4, 4)), 1, 1), np.ndarray)

    def test_thread_count_does_not_change_output(self, monkeypatch):
        import osbf.filters2d as f2

        monkeypatch.setattr(f2, "_BLOCK_PIXELS", 64)
        a = np.random.default_rng(5).random((50, 37)) * 255
        single = osbf(a, 3, 3, n_jobs=None)
        threaded = osbf(a, 3, 3, n_jobs=4)
        np.testing.assert_array_equal(single, threaded)
        np.testing.assert_allclose(single, osbf(a, 3, 3), atol=0)

    @pytest.mark.parametrize("bad", [0, -1, 1.5, True])
    def test_rejects_bad_radius(self, bad):
        with pytest.raises(ValueError):
            osbf(np.ones((4, 4)), bad)

    def test_rejects_nonfinite(self):
        a = np.ones((4, 4))
        a[1, 1] = np.nan
        with pytest.raises(ValueError):
            osbf(a, 1)

    @settings(max_examples=40, deadline=None)
    @given(a=planes, r=st.integers(1, 4))
    def test_property_matches_oracle(self, a, r):
        np.testing.assert_allclose(osbf_step(a, r), shifted_osbf_step(a, r), atol=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(a=planes, r=st.integers(1, 3))
    def test_property_output_in_input_range(self, a, r):
        out = osbf(a, r, 2)
        assert out.min() >= a.min() - 1e-9 and out.max() <= a.max() + 1e-9


class TestFastOSBF:
    def test_valid_quarters_equal_exact_quarters(self):
        a = np.random.default_rng(6).random((20, 14))
        r = 3
        q = _quarter_field(a, r, "valid")
        h, w = a.shape
        # the field at (x + sx, y + sy) is the mean over [x+sx-r, x+sx] x [y+sy-r, y+sy]
        for sx, sy, win in [(0, 0, 4), (r, 0, 3), (0, r, 1), (r, r, 2)]:
            du, dv = WINDOWS[win](r)
            got = q[sy:sy + h, sx:sx + w]
            np.testing.assert_allclose(got, shifted_window_means(a, du, dv), atol=1e-12)

    def test_clamp_mode_only_differs_near_far_edges(self):
        a = phantom(48, 48, seed=1).to_array()
        r = 3
        valid = fast_osbf(a, r, 1)
        clamp = fast_osbf(a, r, 1, shift_mode="clamp")
        np.testing.assert_array_equal(valid[:-r, :-r], clamp[:-r, :-r])
        assert not np.array_equal(valid, clamp)

    def test_bad_shift_mode(self):
        with pytest.raises(ValueError):
            fast_osbf(np.ones((5, 5)), 1, 1, shift_mode="wrap")

    def test_close_to_exact(self):
        a = phantom(96, 96, seed=2).to_array()
        for r in (2, 5):
            d = fast_osbf(a, r, 10) - osbf(a, r, 10)
            assert np.sqrt(np.mean(d * d)) < 5.0

    def test_step_edge_preserved(self):
        img = step(40, 20, 17)
        np.testing.assert_allclose(fast_osbf(img, 4, 10).to_array(), img.to_array(), atol=1e-6)

    def test_single_step_matches_iteration(self):
        a = np.random.default_rng(7).random((11, 19))
        np.testing.assert_array_equal(fast_osbf_step(a, 2), fast_osbf(a, 2, 1))

    def test_thread_count_does_not_change_output(self, monkeypatch):
        import osbf.filters2d as f2

        monkeypatch.setattr(f2, "_BLOCK_PIXELS", 50)
        a = np.random.default_rng(8).random((45, 31))
        np.testing.assert_array_equal(fast_osbf(a, 2, 2), fast_osbf(a, 2, 2, n_jobs=3))


class TestKernels:
    def test_box_one_sided_weights(self):
        ks = make_one_sided_kernels(box_kernel(2))
        assert float(ks.dense(1).max()) == 1 / 9
        assert float(ks.dense(5).max()) == 1 / 15

    def test_dense_support_matches_windows(self):
        r = 2
        ks = make_one_sided_kernels(box_kernel(r))
        for i in range(1, 9):
            du, dv = WINDOWS[i](r)
            support = np.zeros((2 * r + 1, 2 * r + 1), bool)
            support[dv[0] + r:dv[1] + r + 1, du[0] + r:du[1] + r + 1] = True
            np.testing.assert_array_equal(ks.dense(i) > 0, support)
            assert ks.dense(i).sum() == pytest.approx(1.0, abs=1e-12)

    def test_gaussian_taps_frozen(self):
        taps = gaussian_kernel(2, 1.0).taps
        want = [0.05448868454964294, 0.24420134200323332, 0.4026199468942474,
                0.24420134200323332, 0.05448868454964294]
        np.testing.assert_allclose(taps, want, rtol=1e-12)

    def test_gaussian_halves_normalized(self):
        ks = make_one_sided_kernels(gaussian_kernel(5, 3.0))
        for k in (ks.minus, ks.plus, ks.full):
            assert sum(k.taps) == pytest.approx(1.0, abs=1e-12)
        assert ks.minus.u_min == -5 and ks.minus.u_max == 0
        assert ks.plus.u_min == 0 and ks.plus.u_max == 5

    def test_off_center_base_rejected(self):
        from osbf.core import SeparableKernel

        with pytest.raises(ValueError):
            make_one_sided_kernels(SeparableKernel((1.0, 1.0, 1.0), -2))


class TestGenericOneSided:
    def test_box_weights_reproduce_exact_osbf(self):
        a = np.random.default_rng(10).random((21, 18)) * 255
        ks = make_one_sided_kernels(box_kernel(3))
        np.testing.assert_allclose(one_sided_filter(a, ks, 4), osbf(a, 3, 4), atol=1e-9)

    def test_gaussian_step_preserved(self):
        img = step(30, 12, 11)
        ks = make_one_sided_kernels(gaussian_kernel(4, 2.0))
        np.testing.assert_allclose(one_sided_filter(img, ks, 5).to_array(), img.to_array(), atol=1e-6)

    def test_gaussian_filter_blurs_step(self):
        img = step(30, 12, 11)
        out = gaussian_filter(img, 3, 2.0).to_array()
        assert 0 < out[5, 10] < 100 and 0 < out[5, 11] < 100

    def test_gaussian_filter_constant_border(self):
        np.testing.assert_allclose(gaussian_filter(np.full((7, 9), 3.0), 4, 3.0, 2), 3.0, atol=1e-12)


class TestDispatch:
    @pytest.mark.parametrize("variant", ["box", "osbf-exact", "osbf-fast", "one-sided-generic", "gaussian"])
    def test_apply_filter_variants(self, variant):
        a = np.random.default_rng(11).random((16, 16))
        out = apply_filter(a, FilterConfig(radius=2, iterations=2, variant=variant))
        assert out.shape == a.shape

    def test_apply_filter_routes_exact(self):
        a = np.random.default_rng(12).random((16, 16))
        np.testing.assert_array_equal(apply_filter(a, FilterConfig(3, 2)), osbf(a, 3, 2))

    def test_multichannel_per_channel(self):
        rng = np.random.default_rng(13)
        arr = rng.random((12, 14, 3))
        cfg = FilterConfig(2, 3)
        out = filter_multichannel(arr, cfg)
        for c in range(3):
            np.testing.assert_array_equal(out[..., c], osbf(arr[..., c], 2, 3))
        img = MultiChannelImage.from_array(arr)
        np.testing.assert_array_equal(filter_multichannel(img, cfg).to_array(), out)
