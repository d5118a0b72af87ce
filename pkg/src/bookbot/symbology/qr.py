"""QR symbol encoder and decoder, versions 1-4, byte mode only.

The encoder builds a standard symbol (byte-mode segment, Reed-Solomon
blocks, zigzag placement, penalty-scored mask, BCH-protected format info)
and serves as the round-trip oracle for the decoder.  Matrices are
idealized module grids; locating a symbol inside a photograph is out of
scope.
"""

from __future__ import annotations

import numpy as np

from .gf256 import TooManyErrors, rs_encode, rs_decode
from .scan import BitMatrix, ScanResult, SymbolType


class PayloadTooLarge(ValueError):
    pass

class UnsupportedVersion(ValueError):
    pass

class UnsupportedMode(ValueError):
    pass

class FormatInfoUnreadable(ValueError):
    pass


EC_LEVELS = ("L", "M", "Q", "H")

_EC_FORMAT_BITS = {"L": 1, "M": 0, "Q": 3, "H": 2}
_TOTAL_CODEWORDS = {1: 26, 2: 44, 3: 70, 4: 100}
_ECC_PER_BLOCK = {
    "L": {1: 7, 2: 10, 3: 15, 4: 20},
    "M": {1: 10, 2: 16, 3: 26, 4: 18},
    "Q": {1: 13, 2: 22, 3: 18, 4: 26},
    "H": {1: 17, 2: 28, 3: 22, 4: 16},
}
_NUM_BLOCKS = {
    "L": {1: 1, 2: 1, 3: 1, 4: 1},
    "M": {1: 1, 2: 1, 3: 1, 4: 2},
    "Q": {1: 1, 2: 1, 3: 2, 4: 2},
    "H": {1: 1, 2: 1, 3: 2, 4: 4},
}
_ALIGNMENT_CENTER = {1: None, 2: 18, 3: 22, 4: 26}

_FORMAT_MASK = 0x5412


def _check_version(version: int) -> None:
    if version not in (1, 2, 3, 4):
        raise UnsupportedVersion(f"version {version} outside 1..4")


def _check_ec(ec_level: str) -> None:
    if ec_level not in EC_LEVELS:
        raise ValueError(f"EC level must be one of {EC_LEVELS}")


def data_codewords(version: int, ec_level: str) -> int:
    _check_version(version)
    _check_ec(ec_level)
    return _TOTAL_CODEWORDS[version] - _ECC_PER_BLOCK[ec_level][version] * _NUM_BLOCKS[ec_level][version]


def byte_capacity(version: int, ec_level: str) -> int:
    """Maximum byte-mode payload: mode nibble + 8-bit count eat 2 codewords."""
    return data_codewords(version, ec_level) - 2


def format_value(ec_level: str, mask: int) -> int:
    """15-bit masked format sequence: 5 data bits + BCH(15,5) remainder."""
    data = _EC_FORMAT_BITS[ec_level] << 3 | mask
    rem = data
    for _ in range(10):
        rem = (rem << 1) ^ ((rem >> 9) * 0x537)
    return (data << 10 | rem) ^ _FORMAT_MASK


_ALL_FORMATS = {(ec, mask): format_value(ec, mask)
                for ec in EC_LEVELS for mask in range(8)}


def _mask_arrays(size: int) -> list[np.ndarray]:
    y, x = np.mgrid[0:size, 0:size]
    return [
        (x + y) % 2 == 0,
        y % 2 == 0,
        x % 3 == 0,
        (x + y) % 3 == 0,
        (x // 3 + y // 2) % 2 == 0,
        (x * y % 2 + x * y % 3) == 0,
        ((x * y % 2 + x * y % 3) % 2) == 0,
        (((x + y) % 2 + x * y % 3) % 2) == 0,
    ]


def _draw_finder(modules: np.ndarray, func: np.ndarray, top: int, left: int) -> None:
    size = modules.shape[0]
    for dy in range(-1, 8):
        for dx in range(-1, 8):
            y, x = top + dy, left + dx
            if not (0 <= y < size and 0 <= x < size):
                continue
            ring = max(abs(dy - 3), abs(dx - 3))
            modules[y, x] = ring != 2 and ring != 4 and 0 <= dy <= 6 and 0 <= dx <= 6
            func[y, x] = True


def _function_patterns(version: int) -> tuple[np.ndarray, np.ndarray]:
    """Base module grid and function-area mask (format slots reserved)."""
    size = 17 + 4 * version
    modules = np.zeros((size, size), dtype=bool)
    func = np.zeros((size, size), dtype=bool)

    for i in range(size):
        modules[6, i] = modules[i, 6] = i % 2 == 0
        func[6, i] = func[i, 6] = True

    _draw_finder(modules, func, 0, 0)
    _draw_finder(modules, func, 0, size - 7)
    _draw_finder(modules, func, size - 7, 0)

    center = _ALIGNMENT_CENTER[version]
    if center is not None:
        for dy in range(-2, 3):
            for dx in range(-2, 3):
                ring = max(abs(dy), abs(dx))
                modules[center + dy, center + dx] = ring != 1
                func[center + dy, center + dx] = True

    # format information slots (values filled per mask later)
    for y, x in _format_coords_a(size) + _format_coords_b(size):
        func[y, x] = True
    modules[size - 8, 8] = True  # fixed dark module
    func[size - 8, 8] = True
    return modules, func


def _format_coords_a(size: int) -> list[tuple[int, int]]:
    # bit i of the 15-bit format value, copy around the top-left finder
    coords = [(i, 8) for i in range(6)] + [(7, 8), (8, 8), (8, 7)]
    coords += [(8, 14 - i) for i in range(9, 15)]
    return coords


def _format_coords_b(size: int) -> list[tuple[int, int]]:
    # second copy: below the top-right finder and right of the bottom-left one
    coords = [(8, size - 1 - i) for i in range(8)]
    coords += [(size - 15 + i, 8) for i in range(8, 15)]
    return coords


def _place_format(modules: np.ndarray, ec_level: str, mask: int) -> None:
    size = modules.shape[0]
    bits = format_value(ec_level, mask)
    for i, (y, x) in enumerate(_format_coords_a(size)):
        modules[y, x] = (bits >> i) & 1 == 1
    for i, (y, x) in enumerate(_format_coords_b(size)):
        modules[y, x] = (bits >> i) & 1 == 1


def _data_coords(size: int, func: np.ndarray) -> list[tuple[int, int]]:
    """Zigzag order of non-function modules (column pairs, right to left)."""
    coords = []
    right = size - 1
    while right >= 1:
        if right == 6:
            right = 5
        upward = ((right + 1) & 2) == 0
        for vert in range(size):
            y = size - 1 - vert if upward else vert
            for x in (right, right - 1):
                if not func[y, x]:
                    coords.append((y, x))
        right -= 2
    return coords


def _block_layout(version: int, ec_level: str) -> list[int]:
    """Data codeword count per RS block, short blocks first."""
    nblocks = _NUM_BLOCKS[ec_level][version]
    total_data = data_codewords(version, ec_level)
    short = total_data // nblocks
    num_long = total_data % nblocks
    return [short] * (nblocks - num_long) + [short + 1] * num_long


def _interleave(blocks: list[bytes], ecc_len: int) -> bytes:
    data_lens = [len(b) - ecc_len for b in blocks]
    out = bytearray()
    for i in range(max(data_lens)):
        for b, dlen in zip(blocks, data_lens):
            if i < dlen:
                out.append(b[i])
    for i in range(ecc_len):
        for b, dlen in zip(blocks, data_lens):
            out.append(b[dlen + i])
    return bytes(out)


def _deinterleave(codewords: bytes, version: int, ec_level: str) -> list[bytes]:
    ecc_len = _ECC_PER_BLOCK[ec_level][version]
    data_lens = _block_layout(version, ec_level)
    blocks = [bytearray() for _ in data_lens]
    it = iter(codewords)
    for i in range(max(data_lens)):
        for b, dlen in zip(blocks, data_lens):
            if i < dlen:
                b.append(next(it))
    ecc_parts = [bytearray() for _ in data_lens]
    for _ in range(ecc_len):
        for part in ecc_parts:
            part.append(next(it))
    return [bytes(b + e) for b, e in zip(blocks, ecc_parts)]


def _build_codewords(payload: bytes, version: int, ec_level: str) -> bytes:
    cap = byte_capacity(version, ec_level)
    if len(payload) > cap:
        raise PayloadTooLarge(f"{len(payload)} bytes exceed {cap} for v{version}-{ec_level}")
    n_data = data_codewords(version, ec_level)
    bits: list[int] = []

    def push(value: int, width: int) -> None:
        bits.extend((value >> (width - 1 - k)) & 1 for k in range(width))

    push(0b0100, 4)
    push(len(payload), 8)
    for byte in payload:
        push(byte, 8)
    push(0, min(4, n_data * 8 - len(bits)))
    while len(bits) % 8:
        bits.append(0)
    stream = bytearray()
    for i in range(0, len(bits), 8):
        stream.append(int("".join(map(str, bits[i:i + 8])), 2))
    for pad in (0xEC, 0x11) * n_data:
        if len(stream) >= n_data:
            break
        stream.append(pad)

    ecc_len = _ECC_PER_BLOCK[ec_level][version]
    blocks = []
    offset = 0
    for dlen in _block_layout(version, ec_level):
        blocks.append(rs_encode(bytes(stream[offset:offset + dlen]), ecc_len))
        offset += dlen
    return _interleave(blocks, ecc_len)


def _run_score(grid: np.ndarray) -> int:
    # separator column keeps runs from merging across row boundaries
    sep = np.full((grid.shape[0], 1), 2, dtype=np.int8)
    flat = np.hstack([grid, sep]).ravel()
    change = np.flatnonzero(np.diff(flat))
    edges = np.concatenate(([0], change + 1, [flat.size]))
    lengths = np.diff(edges)
    long_runs = lengths[lengths >= 5]
    return int(np.sum(long_runs - 2))


def _penalty(modules: np.ndarray) -> int:
    size = modules.shape[0]
    m = modules.astype(np.int8)
    score = 0
    # runs of five or more equal modules, both orientations
    score += _run_score(m) + _run_score(np.ascontiguousarray(m.T))
    # 2x2 blocks of one color
    a = modules
    same = (a[:-1, :-1] == a[1:, :-1]) & (a[:-1, :-1] == a[:-1, 1:]) & (a[:-1, :-1] == a[1:, 1:])
    score += 3 * int(same.sum())
    # finder-like 1:1:3:1:1 sequence with a 4-module light flank
    pat = np.array([0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1], dtype=np.int8)
    for tmpl in (pat, pat[::-1]):
        for grid in (m, m.T):
            windows = np.lib.stride_tricks.sliding_window_view(grid, 11, axis=1)
            score += 40 * int(np.all(windows == tmpl, axis=2).sum())
    # dark-module balance, 10 points per 5% deviation from 50%
    dark = int(modules.sum())
    total = size * size
    k = (abs(dark * 20 - total * 10) + total - 1) // total - 1
    score += 10 * k
    return score


def encode_qr(payload: bytes, version: int, ec_level: str,
              mask: int | None = None) -> BitMatrix:
    """Encode payload into a QR symbol.

    mask forces a specific mask index 0-7 (testing hook); by default the
    standard four-rule penalty picks the best one, ties to the lowest index.
    """
    _check_version(version)
    _check_ec(ec_level)
    if mask is not None and not 0 <= mask <= 7:
        raise ValueError("mask index must be 0..7")
    payload = bytes(payload)
    codewords = _build_codewords(payload, version, ec_level)

    base, func = _function_patterns(version)
    size = base.shape[0]
    coords = _data_coords(size, func)
    masks = _mask_arrays(size)
    data_area = ~func

    placed = base.copy()
    bit_idx = 0
    for y, x in coords:
        if bit_idx >= len(codewords) * 8:
            break
        byte = codewords[bit_idx >> 3]
        placed[y, x] = (byte >> (7 - (bit_idx & 7))) & 1 == 1
        bit_idx += 1

    candidates = range(8) if mask is None else [mask]
    best = None
    for m_idx in candidates:
        candidate = placed.copy()
        candidate[data_area] ^= masks[m_idx][data_area]
        _place_format(candidate, ec_level, m_idx)
        score = _penalty(candidate)
        if best is None or score < best[0]:
            best = (score, candidate)
    return BitMatrix(best[1])


def _read_format(bits_grid: np.ndarray) -> tuple[str, int]:
    size = bits_grid.shape[0]
    for coords in (_format_coords_a(size), _format_coords_b(size)):
        raw = 0
        for i, (y, x) in enumerate(coords):
            raw |= int(bits_grid[y, x]) << i
        best_key, best_dist = None, 16
        for key, value in _ALL_FORMATS.items():
            dist = bin(raw ^ value).count("1")
            if dist < best_dist:
                best_key, best_dist = key, dist
        if best_dist <= 3:
            return best_key
    raise FormatInfoUnreadable("neither format copy within BCH correction radius")


def decode_qr(matrix) -> ScanResult:
    """Decode a QR module grid back to its byte payload.

    Accepts a BitMatrix or a square boolean array.  Raises
    UnsupportedVersion for sizes outside versions 1-4, FormatInfoUnreadable
    when no format copy is recoverable, TooManyErrors when Reed-Solomon
    correction fails, and UnsupportedMode for non-byte segments.
    """
    if not isinstance(matrix, BitMatrix):
        arr = np.asarray(matrix, dtype=bool)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("matrix must be square")
        if arr.shape[0] not in BitMatrix.VALID_SIZES:
            raise UnsupportedVersion(f"size {arr.shape[0]} is not a version 1-4 symbol")
        matrix = BitMatrix(arr)
    grid = matrix.bits
    size = matrix.size
    version = matrix.version

    ec_level, mask_idx = _read_format(grid)
    _, func = _function_patterns(version)
    unmasked = grid.copy()
    data_area = ~func
    unmasked[data_area] ^= _mask_arrays(size)[mask_idx][data_area]

    coords = _data_coords(size, func)
    n_codewords = _TOTAL_CODEWORDS[version]
    codewords = bytearray()
    acc = 0
    for i, (y, x) in enumerate(coords[:n_codewords * 8]):
        acc = acc << 1 | int(unmasked[y, x])
        if i % 8 == 7:
            codewords.append(acc)
            acc = 0

    ecc_len = _ECC_PER_BLOCK[ec_level][version]
    data = bytearray()
    for block in _deinterleave(bytes(codewords), version, ec_level):
        data.extend(rs_decode(block, ecc_len))

    payload = _parse_byte_segments(bytes(data))
    rect = (0, 0, size, size)
    polygon = ((0, 0), (size - 1, 0), (size - 1, size - 1), (0, size - 1))
    return ScanResult(payload, SymbolType.QRCODE, rect, polygon)


def _parse_byte_segments(data: bytes) -> bytes:
    total_bits = len(data) * 8

    def take(pos: int, width: int) -> tuple[int, int]:
        value = 0
        for _ in range(width):
            value = value << 1 | (data[pos >> 3] >> (7 - (pos & 7))) & 1
            pos += 1
        return value, pos

    out = bytearray()
    pos = 0
    while total_bits - pos >= 4:
        mode, pos = take(pos, 4)
        if mode == 0b0000:
            break
        if mode != 0b0100:
            raise UnsupportedMode(f"segment mode {mode:04b} not supported")
        if total_bits - pos < 8:
            raise UnsupportedMode("truncated character count")
        count, pos = take(pos, 8)
        if total_bits - pos < 8 * count:
            raise UnsupportedMode("segment length exceeds data")
        for _ in range(count):
            byte, pos = take(pos, 8)
            out.append(byte)
    return bytes(out)
