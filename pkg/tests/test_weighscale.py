import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bookbot.weighscale import (
    RAW_MAX,
    RAW_MIN,
    Calibration,
    Decision,
    Hx711Sample,
    InsufficientSamples,
    PayloadPolicy,
    SaturatedReading,
    accept_book,
    raw_to_grams,
    simulate_bridge,
    tare,
)


class TestBridge:
    def test_zero_load_zero_offset(self):
        cal = Calibration(offset_counts=0, scale_counts_per_gram=420)
        assert simulate_bridge(0, cal).raw == 0

    def test_linear_model(self):
        cal = Calibration(offset_counts=1200, scale_counts_per_gram=420)
        assert simulate_bridge(1000, cal).raw == 421_200

    def test_rail_clamp_and_flag(self):
        cal = Calibration(offset_counts=0, scale_counts_per_gram=420)
        sample = simulate_bridge(1e9, cal)
        assert sample.raw == RAW_MAX
        assert sample.saturated

    def test_noise_is_seed_deterministic(self):
        cal = Calibration()
        a = [simulate_bridge(100, cal, noise_seed=7).raw for _ in range(5)]
        b = [simulate_bridge(100, cal, noise_seed=7).raw for _ in range(5)]
        assert a == b
        assert all(abs(v - simulate_bridge(100, cal).raw) <= 2 for v in a)

    def test_negative_load_rejected(self):
        with pytest.raises(ValueError):
            simulate_bridge(-1, Calibration())

    @given(st.floats(min_value=0, max_value=5000), st.floats(min_value=0, max_value=5000))
    def test_monotone_without_noise(self, g1, g2):
        cal = Calibration(offset_counts=500, scale_counts_per_gram=420)
        lo, hi = sorted((g1, g2))
        assert simulate_bridge(lo, cal).raw <= simulate_bridge(hi, cal).raw


class TestConversion:
    def test_tare_point(self):
        cal = Calibration(offset_counts=3000, scale_counts_per_gram=420)
        assert raw_to_grams(Hx711Sample(3000), cal) == 0

    def test_inverse_of_linear_model(self):
        cal = Calibration(offset_counts=1200, scale_counts_per_gram=420)
        assert raw_to_grams(Hx711Sample(1200 + 420 * 1000), cal) == pytest.approx(1000)

    def test_saturated_raises(self):
        cal = Calibration()
        with pytest.raises(SaturatedReading):
            raw_to_grams(Hx711Sample(RAW_MAX), cal)
        with pytest.raises(SaturatedReading):
            raw_to_grams(Hx711Sample(RAW_MIN), cal)

    @given(st.floats(min_value=0, max_value=5000))
    @settings(max_examples=200)
    def test_round_trip_within_quantization(self, grams):
        cal = Calibration(offset_counts=777, scale_counts_per_gram=420)
        sample = simulate_bridge(grams, cal)
        recovered = raw_to_grams(sample, cal)
        assert abs(recovered - grams) <= 0.5 / cal.scale_counts_per_gram + 1e-12

    def test_out_of_range_raw_rejected(self):
        with pytest.raises(ValueError):
            Hx711Sample(RAW_MAX + 1)


class TestTare:
    def test_constant_samples(self):
        cal = tare([Hx711Sample(100)] * 8, Calibration())
        assert cal.offset_counts == 100

    def test_median_with_outlier(self):
        raws = [98, 99, 100, 100, 100, 101, 101, 150]
        cal = tare([Hx711Sample(r) for r in raws], Calibration())
        assert cal.offset_counts == 100

    def test_insufficient(self):
        with pytest.raises(InsufficientSamples):
            tare([Hx711Sample(1)] * 3, Calibration())

    @given(st.lists(st.integers(min_value=-1000, max_value=1000), min_size=8, max_size=30),
           st.randoms(use_true_random=False))
    def test_permutation_invariant(self, raws, rnd):
        samples = [Hx711Sample(r) for r in raws]
        shuffled = list(samples)
        rnd.shuffle(shuffled)
        base = Calibration()
        assert tare(samples, base).offset_counts == tare(shuffled, base).offset_counts

    def test_scale_untouched(self):
        base = Calibration(offset_counts=5, scale_counts_per_gram=123.5)
        assert tare([Hx711Sample(9)] * 8, base).scale_counts_per_gram == 123.5


class TestThreshold:
    def test_accept_below(self):
        assert accept_book(4800, 150, PayloadPolicy()) is Decision.ACCEPT

    def test_reject_above(self):
        policy = PayloadPolicy()
        assert accept_book(4900, 200, policy) is Decision.REJECT_THRESHOLD
        assert policy.warn_state

    def test_boundary_equality_accepts(self):
        policy = PayloadPolicy()
        assert accept_book(5000, 0, policy) is Decision.ACCEPT
        assert accept_book(4999, 1, policy) is Decision.ACCEPT
        assert not policy.warn_state

    @given(st.integers(min_value=0, max_value=6000), st.integers(min_value=0, max_value=2000))
    def test_never_wrong_side_of_threshold(self, total, book):
        decision = accept_book(total, book, PayloadPolicy())
        if total + book <= 5000:
            assert decision is Decision.ACCEPT
        else:
            assert decision is Decision.REJECT_THRESHOLD

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            accept_book(-1, 0, PayloadPolicy())
