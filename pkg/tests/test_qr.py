import random

import numpy as np
import pytest

from bookbot.symbology import (
    BitMatrix,
    FormatInfoUnreadable,
    PayloadTooLarge,
    SymbolType,
    TooManyErrors,
    UnsupportedMode,
    UnsupportedVersion,
    byte_capacity,
    decode_qr,
    encode_qr,
)
from bookbot.symbology.qr import (
    _ECC_PER_BLOCK,
    _TOTAL_CODEWORDS,
    _block_layout,
    _data_coords,
    _function_patterns,
    _interleave,
    _mask_arrays,
    _place_format,
)
from bookbot.symbology import rs_encode

EC_LEVELS = ("L", "M", "Q", "H")


def assemble_symbol(data_codewords: bytes, version: int, ec: str, mask: int) -> BitMatrix:
    """Test rig: place arbitrary data codewords into a valid symbol."""
    ecc_len = _ECC_PER_BLOCK[ec][version]
    blocks = []
    offset = 0
    for dlen in _block_layout(version, ec):
        blocks.append(rs_encode(bytes(data_codewords[offset:offset + dlen]), ecc_len))
        offset += dlen
    stream = _interleave(blocks, ecc_len)
    base, func = _function_patterns(version)
    size = base.shape[0]
    placed = base.copy()
    for i, (y, x) in enumerate(_data_coords(size, func)):
        if i >= len(stream) * 8:
            break
        placed[y, x] = (stream[i >> 3] >> (7 - (i & 7))) & 1 == 1
    area = ~func
    placed[area] ^= _mask_arrays(size)[mask][area]
    _place_format(placed, ec, mask)
    return BitMatrix(placed)


def block_module_map(version: int, ec: str):
    """For each RS block, the matrix module indices of its codewords."""
    layout = _block_layout(version, ec)
    ecc_len = _ECC_PER_BLOCK[ec][version]
    nblocks = len(layout)
    order = []  # interleaved position -> (block, within-block index)
    for i in range(max(layout)):
        for b, dlen in enumerate(layout):
            if i < dlen:
                order.append(b)
    for i in range(ecc_len):
        for b in range(nblocks):
            order.append(b)
    per_block = [[] for _ in range(nblocks)]
    for interleaved_idx, b in enumerate(order):
        per_block[b].append(interleaved_idx)
    return per_block


class TestEncode:
    def test_capacities(self):
        assert byte_capacity(1, "L") == 17
        assert byte_capacity(2, "M") == 26
        assert byte_capacity(4, "H") == 34

    def test_payload_too_large(self):
        with pytest.raises(PayloadTooLarge):
            encode_qr(b"x" * 18, 1, "L")

    def test_version_bounds(self):
        with pytest.raises(UnsupportedVersion):
            encode_qr(b"x", 5, "L")
        with pytest.raises(ValueError):
            encode_qr(b"x", 1, "X")

    def test_sizes(self):
        for v, size in ((1, 21), (2, 25), (3, 29), (4, 33)):
            assert encode_qr(b"hi", v, "M").size == size

    def test_finder_corners_dark(self):
        m = encode_qr(b"hello", 2, "Q").bits
        for y, x in ((0, 0), (0, 24), (24, 0)):
            assert m[y, x]


class TestRoundTrip:
    @pytest.mark.parametrize("version", [1, 2, 3, 4])
    @pytest.mark.parametrize("ec", EC_LEVELS)
    def test_capacity_boundaries(self, version, ec):
        rng = random.Random(version * 31 + ord(ec))
        cap = byte_capacity(version, ec)
        for n in sorted({0, 1, cap - 1, cap}):
            payload = bytes(rng.randrange(256) for _ in range(n))
            result = decode_qr(encode_qr(payload, version, ec))
            assert result.data == payload
            assert result.symbol_type is SymbolType.QRCODE

    def test_empty_payload(self):
        assert decode_qr(encode_qr(b"", 1, "L")).data == b""

    def test_mask_invariance(self):
        payload = b"BB1|alice2019|1700000000|0123456789abcdef"
        for mask in range(8):
            assert decode_qr(encode_qr(payload, 3, "L", mask=mask)).data == payload

    def test_result_geometry(self):
        result = decode_qr(encode_qr(b"geometry", 2, "M"))
        assert result.rect == (0, 0, 25, 25)
        assert len(result.polygon) == 4
        assert result.polygon[0] == (0, 0)

    def test_utf8_token_round_trip(self):
        token = "BB1|chitra2021|1700003600|00ff00ff00ff00ff"
        matrix = encode_qr(token.encode("utf-8"), 3, "M")
        assert decode_qr(matrix).text() == token


class TestErrorResilience:
    @pytest.mark.parametrize("version", [1, 2, 3, 4])
    @pytest.mark.parametrize("ec", EC_LEVELS)
    def test_corrects_floor_half_nsym_per_block(self, version, ec):
        rng = random.Random(hash((version, ec)) & 0xFFFF)
        payload = bytes(rng.randrange(256) for _ in range(byte_capacity(version, ec)))
        matrix = encode_qr(payload, version, ec)
        bits = matrix.bits.copy()
        coords = _data_coords(matrix.size, _function_patterns(version)[1])
        ecc_len = _ECC_PER_BLOCK[ec][version]
        for block_positions in block_module_map(version, ec):
            for cw_idx in rng.sample(block_positions, ecc_len // 2):
                bit = rng.randrange(8)
                y, x = coords[cw_idx * 8 + bit]
                bits[y, x] ^= True
        assert decode_qr(BitMatrix(bits)).data == payload

    def test_too_many_errors(self):
        rng = random.Random(99)
        payload = b"too many errors for level L"
        matrix = encode_qr(payload, 2, "L")  # 10 ecc -> corrects 5
        bits = matrix.bits.copy()
        coords = _data_coords(matrix.size, _function_patterns(2)[1])
        for cw_idx in range(8):  # corrupt 8 distinct codewords
            for bit in range(8):
                y, x = coords[cw_idx * 8 + bit]
                bits[y, x] ^= bool(rng.getrandbits(1)) or bit == 0
        with pytest.raises(TooManyErrors):
            decode_qr(BitMatrix(bits))


class TestDecodeErrors:
    def test_all_zero_matrix(self):
        with pytest.raises(FormatInfoUnreadable):
            decode_qr(np.zeros((21, 21), dtype=bool))

    def test_all_ones_matrix(self):
        with pytest.raises((FormatInfoUnreadable, TooManyErrors)):
            decode_qr(np.ones((21, 21), dtype=bool))

    def test_unsupported_version_size(self):
        with pytest.raises(UnsupportedVersion):
            decode_qr(np.zeros((37, 37), dtype=bool))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            decode_qr(np.zeros((21, 25), dtype=bool))

    def test_unsupported_mode_segment(self):
        # data starting with a numeric-mode nibble (0001)
        data = bytes([0b0001_0000]) + bytes(18)
        matrix = assemble_symbol(data, 1, "L", mask=0)
        with pytest.raises(UnsupportedMode):
            decode_qr(matrix)

    def test_format_damage_within_bch_radius(self):
        matrix = encode_qr(b"format", 1, "M")
        bits = matrix.bits.copy()
        # flip three format modules of copy A (row 8 left half)
        for x in (0, 2, 4):
            bits[8, x] ^= True
        assert decode_qr(BitMatrix(bits)).data == b"format"


class TestBitMatrix:
    def test_version_size_relation(self):
        for version in (1, 2, 3, 4):
            m = BitMatrix.empty(version)
            assert m.size == 17 + 4 * version
            assert m.version == version

    def test_invalid_sizes(self):
        with pytest.raises(ValueError):
            BitMatrix(np.zeros((20, 20), dtype=bool))
        with pytest.raises(ValueError):
            BitMatrix(np.zeros((21, 25), dtype=bool))
