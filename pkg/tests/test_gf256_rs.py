import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bookbot.symbology import CapacityExceeded, Gf256Poly, TooManyErrors, rs_decode, rs_encode
from bookbot.symbology.gf256 import gf_div, gf_inverse, gf_mul, gf_pow, rs_generator_poly


def slow_mul(a, b):
    """Table-free peasant multiplication modulo 0x11D (independent oracle)."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        if a & 0x100:
            a ^= 0x11D
        b >>= 1
    return out


def slow_poly_remainder(message, generator):
    """Plain long division over GF(256) using only slow_mul."""
    rem = list(message)
    for i in range(len(message) - len(generator) + 1):
        coef = rem[i]
        if coef == 0:
            continue
        # generator is monic, so the factor is just the leading coefficient
        for j, g in enumerate(generator):
            rem[i + j] ^= slow_mul(coef, g)
    return rem[-(len(generator) - 1):]


class TestFieldLaws:
    def test_inverses_exhaustive(self):
        for a in range(1, 256):
            assert gf_mul(a, gf_inverse(a)) == 1

    def test_multiplication_matches_oracle_exhaustive(self):
        for a in range(256):
            for b in range(0, 256, 7):
                assert gf_mul(a, b) == slow_mul(a, b)

    def test_distributivity(self):
        rng = random.Random(1)
        for a in range(1, 256):
            for _ in range(8):
                b, c = rng.randrange(256), rng.randrange(256)
                assert gf_mul(a, b ^ c) == gf_mul(a, b) ^ gf_mul(a, c)

    def test_commutative_and_divide(self):
        rng = random.Random(2)
        for _ in range(2000):
            a, b = rng.randrange(256), rng.randrange(1, 256)
            assert gf_mul(a, b) == gf_mul(b, a)
            assert gf_mul(gf_div(a, b), b) == a

    def test_pow_identity(self):
        assert gf_pow(2, 0) == 1
        assert gf_pow(2, 255) == 1  # multiplicative group order divides 255


class TestPoly:
    def test_normalization(self):
        assert Gf256Poly([0, 0, 3, 1]).coefficients == [3, 1]
        assert Gf256Poly([0, 0]).coefficients == [0]
        assert Gf256Poly([0]).is_zero()

    def test_divmod_reconstructs(self):
        rng = random.Random(3)
        for _ in range(100):
            a = Gf256Poly([rng.randrange(256) for _ in range(rng.randrange(1, 20))])
            b = Gf256Poly([rng.randrange(1, 256)] + [rng.randrange(256) for _ in range(rng.randrange(0, 8))])
            q, r = a.divmod(b)
            assert q * b + r == a
            assert r.is_zero() or r.degree < b.degree


class TestRsEncode:
    def test_zero_data_zero_parity(self):
        for nsym in (2, 5, 10):
            cw = rs_encode(bytes(20), nsym)
            assert cw == bytes(20 + nsym)

    def test_parity_matches_long_division_oracle(self):
        rng = random.Random(4)
        for nsym in (2, 4, 7, 16):
            gen = rs_generator_poly(nsym).coefficients
            data = [rng.randrange(256) for _ in range(rng.randrange(1, 40))]
            expected = slow_poly_remainder(data + [0] * nsym, gen)
            assert list(rs_encode(bytes(data), nsym)[-nsym:]) == expected

    def test_single_byte_nsym2(self):
        data = b"\x12"
        gen = rs_generator_poly(2).coefficients
        oracle = slow_poly_remainder([0x12, 0, 0], gen)
        assert list(rs_encode(data, 2)[1:]) == oracle

    def test_capacity(self):
        with pytest.raises(CapacityExceeded):
            rs_encode(bytes(250), 10)
        rs_encode(bytes(245), 10)  # exactly 255 is fine


class TestRsDecode:
    def test_identity_without_errors(self):
        data = bytes(range(50))
        assert rs_decode(rs_encode(data, 8), 8) == data

    @given(st.binary(min_size=1, max_size=60), st.integers(min_value=2, max_value=20),
           st.randoms(use_true_random=False))
    @settings(max_examples=150, deadline=None)
    def test_corrects_up_to_capacity(self, data, nsym, rnd):
        cw = bytearray(rs_encode(data, nsym))
        n_errors = rnd.randint(0, nsym // 2)
        for pos in rnd.sample(range(len(cw)), n_errors):
            cw[pos] ^= rnd.randint(1, 255)
        assert rs_decode(bytes(cw), nsym) == data

    def test_beyond_capacity_never_silently_correct(self):
        # t+1 distinct byte errors leave the word t+1 away from the true
        # codeword, so the decoder either raises or lands on a different
        # codeword; it can never return the original data
        rng = random.Random(5)
        outcomes = {"raised": 0, "misdecoded": 0}
        for _ in range(50):
            data = bytes(rng.randrange(256) for _ in range(30))
            nsym = 8
            cw = bytearray(rs_encode(data, nsym))
            for pos in rng.sample(range(len(cw)), nsym // 2 + 1):
                cw[pos] ^= rng.randrange(1, 256)
            try:
                out = rs_decode(bytes(cw), nsym)
                assert out != data
                outcomes["misdecoded"] += 1
            except TooManyErrors:
                outcomes["raised"] += 1
        assert outcomes["raised"] > 0

    def test_short_codeword_rejected(self):
        with pytest.raises(ValueError):
            rs_decode(b"\x01\x02", 2)
