"""Tests for the standard-deviation filter, the DCT and the TVFM codec."""

import numpy as np
import pytest

from imaging import RawImage
from preprocess import (
    FeatureMapFormatError,
    FilterSpec,
    InvalidFilterSpecError,
    PadTooWideError,
    branch_inputs,
    dct1d,
    dct2,
    dct2_fast,
    decode_feature_map,
    encode_feature_map,
    idct2,
    idct2_fast,
    local_mean,
    local_std_filter,
    read_feature_map,
    signed_log,
    symmetric_pad,
    write_feature_map,
)


def reflect(i, n):
    """Edge-including mirror index."""
    if i < 0:
        return -i - 1
    if i >= n:
        return 2 * n - i - 1
    return i


def std_filter_oracle(img, window):
    """Pad by explicit reflection, then take np.std of every window."""
    h, w = img.shape
    k = window // 2
    out = np.empty((h, w))
    for y in range(h):
        for x in range(w):
            values = [
                img[reflect(y + dy, h), reflect(x + dx, w)]
                for dy in range(-k, k + 1)
                for dx in range(-k, k + 1)
            ]
            out[y, x] = np.std(values)
    return out


def dct2_oracle(a):
    """Direct evaluation of the 2D DCT-II sum, coefficient by coefficient."""
    m, n = a.shape
    i = np.arange(m)[:, None]
    j = np.arange(n)[None, :]
    out = np.empty((m, n))
    for k in range(m):
        ak = np.sqrt(1 / m) if k == 0 else np.sqrt(2 / m)
        for l in range(n):
            al = np.sqrt(1 / n) if l == 0 else np.sqrt(2 / n)
            basis = np.cos(np.pi * (2 * i + 1) * k / (2 * m)) * np.cos(np.pi * (2 * j + 1) * l / (2 * n))
            out[k, l] = ak * al * np.sum(a * basis)
    return out


class TestSymmetricPad:
    """Tests for symmetric_pad."""

    def test_two_by_two_example(self):
        """Test the edge-repeating mirror on a 2x2 input."""
        out = symmetric_pad(np.array([[1.0, 2.0], [3.0, 4.0]]), 1)

        expected = [[1, 1, 2, 2], [1, 1, 2, 2], [3, 3, 4, 4], [3, 3, 4, 4]]
        np.testing.assert_array_equal(out, np.array(expected, dtype=np.float64))

    def test_zero_width_is_identity(self, rng):
        """Test that k=0 returns an equal copy."""
        img = rng.random((5, 6))

        np.testing.assert_array_equal(symmetric_pad(img, 0), img)

    def test_four_by_four_grows_to_six(self, rng):
        """Test that k=1 adds one row and column per side."""
        assert symmetric_pad(rng.random((4, 4)), 1).shape == (6, 6)

    def test_pad_too_wide(self):
        """Test that k >= min(h, w) raises PadTooWideError."""
        with pytest.raises(PadTooWideError):
            symmetric_pad(np.zeros((2, 5)), 2)

    def test_rejects_non_finite(self):
        """Test that NaN input is rejected."""
        with pytest.raises(ValueError, match="NaN"):
            symmetric_pad(np.array([[np.nan, 0.0], [0.0, 0.0]]), 1)


class TestFilterSpec:
    """Tests for FilterSpec geometry."""

    def test_default_window(self):
        """Test that the default window is 3x3 with pad width 1."""
        spec = FilterSpec()

        assert spec.window_size == 3
        assert spec.pad_width == 1
        assert spec.pixel_count == 9

    @pytest.mark.parametrize("size", [1, 2, 4])
    def test_rejects_bad_window(self, size):
        """Test that even or too small windows are rejected."""
        with pytest.raises(InvalidFilterSpecError):
            FilterSpec(window_size=size)


class TestLocalStatistics:
    """Tests for local_mean and local_std_filter."""

    def test_local_mean_constant(self):
        """Test that a constant padded image has a constant mean."""
        out = local_mean(np.full((6, 6), 0.4), FilterSpec())

        assert out.shape == (4, 4)
        np.testing.assert_allclose(out, 0.4, rtol=0, atol=1e-15)

    def test_local_mean_one_to_nine(self):
        """Test that the mean of 1..9 is 5."""
        window = np.arange(1, 10, dtype=np.float64).reshape(3, 3)

        assert local_mean(window, FilterSpec())[0, 0] == 5.0

    def test_std_one_to_nine(self):
        """Test the population std of 1..9 at the centre pixel."""
        img = np.arange(1, 10, dtype=np.float64).reshape(3, 3)

        assert local_std_filter(img)[1, 1] == pytest.approx(np.sqrt(60 / 9), abs=1e-12)

    def test_constant_image_exactly_zero(self):
        """Test that a constant image gives exactly 0 everywhere."""
        out = local_std_filter(np.full((17, 11), 0.737))

        assert out.shape == (17, 11)
        assert np.all(out == 0.0)

    def test_matches_brute_force_oracle(self, rng):
        """Test agreement with a window-by-window oracle on random images."""
        for trial in range(100):
            h, w = rng.integers(5, 33, size=2)
            window = 3 if trial % 2 == 0 else 5
            img = rng.random((h, w))

            np.testing.assert_allclose(
                local_std_filter(img, FilterSpec(window_size=window)),
                std_filter_oracle(img, window),
                rtol=0, atol=1e-12,
            )

    def test_shift_invariance(self, rng):
        """Test that adding a constant leaves the output unchanged."""
        img = rng.random((20, 24))

        np.testing.assert_allclose(local_std_filter(img + 3.7), local_std_filter(img), rtol=0, atol=1e-12)

    def test_scaling_by_abs_factor(self, rng):
        """Test that scaling the input by c scales the output by |c|."""
        img = rng.random((20, 24))

        np.testing.assert_allclose(
            local_std_filter(-2.5 * img), 2.5 * local_std_filter(img), rtol=0, atol=1e-12
        )

    def test_non_negative(self, rng):
        """Test that every output is >= 0."""
        assert local_std_filter(rng.normal(size=(30, 30))).min() >= 0.0


class TestDCT:
    """Tests for the separable and fast DCT paths."""

    def test_dct1d_constant(self):
        """Test that [1, 1, 1, 1] maps to [2, 0, 0, 0]."""
        np.testing.assert_allclose(dct1d(np.ones(4)), [2.0, 0.0, 0.0, 0.0], atol=1e-15)

    def test_dct1d_single_value(self):
        """Test that a length-1 DCT is the identity."""
        np.testing.assert_array_equal(dct1d(np.array([3.25])), [3.25])

    def test_dct2_constant_is_dc_only(self):
        """Test that a constant N x N image puts c*N in the DC term."""
        out = dct2(np.full((8, 8), 0.5))

        assert out[0, 0] == pytest.approx(4.0, abs=1e-12)
        out[0, 0] = 0.0
        np.testing.assert_allclose(out, 0.0, atol=1e-12)

    def test_dct2_two_by_two_ones(self):
        """Test the 2x2 all-ones case."""
        np.testing.assert_allclose(dct2(np.ones((2, 2))), [[2.0, 0.0], [0.0, 0.0]], atol=1e-15)

    def test_dct2_matches_direct_sum(self, rng):
        """Test the separable DCT against the direct double sum on 200 random matrices."""
        for _ in range(200):
            m, n = rng.integers(1, 17, size=2)
            a = rng.normal(size=(m, n))

            assert np.max(np.abs(dct2(a) - dct2_oracle(a))) <= 1e-9

    def test_parseval(self, rng):
        """Test that the orthonormal DCT preserves energy."""
        a = rng.normal(size=(31, 17))

        assert np.sum(dct2(a) ** 2) == pytest.approx(np.sum(a ** 2), rel=1e-9)

    def test_round_trip(self, rng):
        """Test that idct2(dct2(x)) recovers a random 128x128 map."""
        a = rng.random((128, 128))

        assert np.max(np.abs(idct2(dct2(a)) - a)) <= 1e-9

    def test_idct2_examples(self):
        """Test the inverse on the 2x2 DC case and on zeros."""
        np.testing.assert_allclose(idct2(np.array([[2.0, 0.0], [0.0, 0.0]])), np.ones((2, 2)), atol=1e-15)
        np.testing.assert_array_equal(idct2(np.zeros((3, 5))), np.zeros((3, 5)))

    def test_fast_path_agrees(self, rng):
        """Test that the scipy path matches the separable reference."""
        a = rng.random((128, 128))

        np.testing.assert_allclose(dct2_fast(a), dct2(a), rtol=0, atol=1e-9)
        np.testing.assert_allclose(idct2_fast(dct2(a)), a, rtol=0, atol=1e-9)

    def test_linearity(self, rng):
        """Test that dct2 is linear."""
        a, b = rng.random((9, 12)), rng.random((9, 12))

        np.testing.assert_allclose(dct2(2 * a - b), 2 * dct2(a) - dct2(b), atol=1e-12)

    def test_rejects_empty(self):
        """Test that empty inputs raise ValueError."""
        with pytest.raises(ValueError):
            dct1d(np.array([]))


class TestBranchInputs:
    """Tests for branch_inputs and signed_log."""

    def test_constant_image(self):
        """Test that a constant image gives a zero std map and a DC-only DCT map."""
        img = RawImage.from_array(np.full((200, 150), 51))
        std_map, dct_map = branch_inputs(img)

        assert std_map.shape == (128, 128)
        assert dct_map.shape == (128, 128)
        assert np.all(std_map == 0.0)
        assert dct_map[0, 0] == pytest.approx(0.2 * 128, abs=1e-9)
        rest = dct_map.copy()
        rest[0, 0] = 0.0
        np.testing.assert_allclose(rest, 0.0, atol=1e-9)

    def test_pure(self, rng):
        """Test that the same image gives bitwise-identical maps."""
        img = RawImage.from_array(rng.integers(0, 256, size=(256, 256)))
        a = branch_inputs(img)
        b = branch_inputs(img)

        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])

    def test_custom_size_and_signed_log(self, rng):
        """Test that size and signed_log_dct are honoured."""
        img = RawImage.from_array(rng.integers(0, 256, size=(90, 90)))
        std_map, dct_map = branch_inputs(img, size=72, signed_log_dct=True)
        _, raw_dct = branch_inputs(img, size=72)

        assert std_map.shape == (72, 72)
        np.testing.assert_array_equal(dct_map, signed_log(raw_dct))

    def test_signed_log_values(self):
        """Test that signed_log is odd and zero at zero."""
        out = signed_log(np.array([-np.e + 1, 0.0, np.e - 1]))

        np.testing.assert_allclose(out, [-1.0, 0.0, 1.0])


class TestFeatureMapCodec:
    """Tests for the TVFM codec."""

    def test_round_trip_exact(self, rng, tmp_path):
        """Test that maps survive a write and read bit for bit."""
        fm = rng.normal(size=(7, 11))
        path = tmp_path / "maps" / "a.tvfm"
        write_feature_map(fm, path)

        assert path.read_bytes()[:4] == b"TVFM"
        np.testing.assert_array_equal(read_feature_map(path), fm)

    def test_bad_magic(self, rng):
        """Test that a wrong magic is rejected."""
        data = bytearray(encode_feature_map(rng.random((2, 2))))
        data[:4] = b"XXXX"

        with pytest.raises(FeatureMapFormatError, match="magic"):
            decode_feature_map(bytes(data))

    def test_truncated(self, rng):
        """Test that a short payload is rejected."""
        data = encode_feature_map(rng.random((3, 3)))

        with pytest.raises(FeatureMapFormatError):
            decode_feature_map(data[:-8])
        with pytest.raises(FeatureMapFormatError, match="header"):
            decode_feature_map(data[:6])

    def test_unknown_version(self, rng):
        """Test that a future version is rejected."""
        data = bytearray(encode_feature_map(rng.random((2, 2))))
        data[4] = 9

        with pytest.raises(FeatureMapFormatError, match="version"):
            decode_feature_map(bytes(data))
