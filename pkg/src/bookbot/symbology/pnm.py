"""Binary PGM (P5) and PBM (P4) codecs for scanlines and bit matrices."""

from __future__ import annotations

from pathlib import Path

import numpy as np


class PnmFormatError(ValueError):
    pass


def _read_header(data: bytes, magic: bytes, fields: int) -> tuple[list[int], int]:
    if not data.startswith(magic):
        raise PnmFormatError(f"expected {magic!r} header")
    values: list[int] = []
    pos = 2
    while len(values) < fields:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        if not token.isdigit():
            raise PnmFormatError(f"bad header token {token!r}")
        values.append(int(token))
    return values, pos + 1  # single whitespace byte after the last field


def encode_pgm(rows: np.ndarray) -> bytes:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.uint8))
    h, w = rows.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + rows.tobytes()


def decode_pgm(data: bytes) -> np.ndarray:
    (w, h, maxval), offset = _read_header(data, b"P5", 3)
    if maxval != 255:
        raise PnmFormatError("only 8-bit PGM supported")
    pixels = data[offset:offset + w * h]
    if len(pixels) != w * h:
        raise PnmFormatError("pixel data truncated")
    return np.frombuffer(pixels, dtype=np.uint8).reshape(h, w)


def encode_pbm(bits: np.ndarray) -> bytes:
    bits = np.asarray(bits, dtype=bool)
    h, w = bits.shape
    return f"P4\n{w} {h}\n".encode("ascii") + np.packbits(bits, axis=1).tobytes()


def decode_pbm(data: bytes) -> np.ndarray:
    (w, h), offset = _read_header(data, b"P4", 2)
    row_bytes = (w + 7) // 8
    raw = data[offset:offset + row_bytes * h]
    if len(raw) != row_bytes * h:
        raise PnmFormatError("bitmap data truncated")
    packed = np.frombuffer(raw, dtype=np.uint8).reshape(h, row_bytes)
    return np.unpackbits(packed, axis=1)[:, :w].astype(bool)


def write_pgm(path, rows: np.ndarray) -> None:
    Path(path).write_bytes(encode_pgm(rows))


def read_pgm(path) -> np.ndarray:
    return decode_pgm(Path(path).read_bytes())


def write_pbm(path, bits: np.ndarray) -> None:
    Path(path).write_bytes(encode_pbm(bits))


def read_pbm(path) -> np.ndarray:
    return decode_pbm(Path(path).read_bytes())
