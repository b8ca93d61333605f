"""Transform correctness against independent oracles.

The naive double-loop oracle below evaluates the cosine sums directly from
their definition; scipy's orthonormal DCT-II provides a second, external
cross-check.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.fft import dct as scipy_dct

from tsadvkit.spectral import (
    AllLowFrequencyError,
    FilterSpec,
    dc_magnitude,
    dct,
    highpass,
    idct,
    lf_norm,
)


def naive_dct(p):
    """O(T^2) double loop straight from the transform definition."""
    T = len(p)
    out = np.zeros(T)
    for k in range(T):
        scale = math.sqrt(1.0 / T) if k == 0 else math.sqrt(2.0 / T)
        acc = 0.0
        for n in range(T):
            acc += p[n] * math.cos(math.pi * (2 * n + 1) * k / (2 * T))
        out[k] = scale * acc
    return out


class TestDct:
    def test_constant_series_is_dc_only(self):
        for T in (4, 9):
            w = dct(np.full(T, 3.0))
            assert w[0] == pytest.approx(3.0 * np.sqrt(T))
            assert np.max(np.abs(w[1:])) < 1e-12

    @pytest.mark.parametrize("T", [8, 100, 1024])
    def test_round_trip(self, rng, T):
        p = rng.standard_normal(T)
        assert np.max(np.abs(idct(dct(p)) - p)) < 1e-9

    def test_matches_naive_oracle(self, rng):
        for T in (2, 5, 16):
            p = rng.standard_normal(T)
            assert np.allclose(dct(p), naive_dct(p), atol=1e-10)

    def test_matches_scipy_ortho(self, rng):
        p = rng.standard_normal(33)
        assert np.allclose(dct(p), scipy_dct(p, type=2, norm="ortho"), atol=1e-10)

    def test_two_point_example(self):
        w = dct(np.array([1.0, -1.0]))
        assert w[0] == pytest.approx(0.0, abs=1e-15)
        assert w[1] == pytest.approx(naive_dct(np.array([1.0, -1.0]))[1])

    @given(st.integers(2, 40), st.integers(0, 10 ** 6))
    @settings(max_examples=40, deadline=None)
    def test_parseval(self, T, seed):
        p = np.random.default_rng(seed).standard_normal(T)
        assert abs(np.linalg.norm(dct(p)) - np.linalg.norm(p)) < 1e-9

    def test_linearity(self, rng):
        p, q = rng.standard_normal(20), rng.standard_normal(20)
        assert np.allclose(dct(2.5 * p - 0.3 * q), 2.5 * dct(p) - 0.3 * dct(q), atol=1e-9)


class TestIdct:
    def test_zero_spectrum(self):
        assert np.array_equal(idct(np.zeros(6)), np.zeros(6))

    def test_dc_reconstruction(self):
        T = 9
        w = np.zeros(T)
        w[0] = np.sqrt(T)
        assert np.allclose(idct(w), np.ones(T), atol=1e-12)

    def test_round_trip_from_spectrum(self, rng):
        w = rng.standard_normal(41)
        assert np.max(np.abs(dct(idct(w)) - w)) < 1e-9


class TestHighpass:
    def test_cutoff_zero_is_exact_noop(self, rng):
        p = rng.standard_normal(17)
        assert np.array_equal(highpass(p, FilterSpec(0)), p)

    def test_constant_input_errors(self):
        with pytest.raises(AllLowFrequencyError, match="entirely low-frequency"):
            highpass(np.full(8, 2.0), FilterSpec(1))

    def test_norm_preserved_and_band_zeroed(self, rng):
        T = 64
        p = rng.standard_normal(T)
        out = highpass(p, FilterSpec(T // 4, preserve_l2=True))
        assert abs(np.linalg.norm(out) - np.linalg.norm(p)) < 1e-9
        assert np.max(np.abs(dct(out)[: T // 4])) < 1e-9

    def test_idempotent_without_rescale(self, rng):
        p = rng.standard_normal(32)
        spec = FilterSpec(8, preserve_l2=False)
        once = highpass(p, spec)
        assert np.allclose(highpass(once, spec), once, atol=1e-9)


class TestLfNorm:
    def test_filtered_signal_has_zero_lf(self, rng):
        p = rng.standard_normal(40)
        out = highpass(p, FilterSpec(10))
        assert lf_norm(out, 10) < 1e-9

    def test_constant_series(self):
        assert lf_norm(np.full(16, -2.5), 4) == pytest.approx(2.5 * 4.0)

    def test_parseval_decomposition(self, rng):
        p = rng.standard_normal(30)
        w = dct(p)
        low = lf_norm(p, 7)
        high = np.linalg.norm(w[7:])
        assert abs(low ** 2 + high ** 2 - np.linalg.norm(p) ** 2) < 1e-9


class TestDcMagnitude:
    def test_zero_sum(self):
        assert dc_magnitude(np.array([1.0, -1.0])) == 0.0

    def test_all_ones(self):
        assert dc_magnitude(np.ones(3)) == 3.0

    def test_relation_to_dc_coefficient(self, rng):
        p = rng.standard_normal(25)
        assert abs(dc_magnitude(p) - abs(dct(p)[0]) * np.sqrt(25)) < 1e-9
