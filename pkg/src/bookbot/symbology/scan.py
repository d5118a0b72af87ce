"""Decode-result container shared by the EAN-13 and QR decoders."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class SymbolType(enum.Enum):
    EAN13 = "EAN13"
    QRCODE = "QRCODE"


@dataclass(frozen=True)
class ScanResult:
    """One decoded symbol: payload bytes plus where it was found.

    rect is (left, top, width, height); polygon lists corner points in
    order, at least 4 for QR codes and 2 for linear barcodes.
    """

    data: bytes
    symbol_type: SymbolType
    rect: tuple[int, int, int, int]
    polygon: tuple[tuple[int, int], ...]

    def __post_init__(self):
        left, top, width, height = self.rect
        if width <= 0 or height <= 0:
            raise ValueError("rect must have positive extent")
        minimum = 4 if self.symbol_type is SymbolType.QRCODE else 2
        if len(self.polygon) < minimum:
            raise ValueError(f"polygon needs >= {minimum} points")

    def text(self) -> str:
        """Payload decoded as UTF-8 (student tokens are always text)."""
        return self.data.decode("utf-8")


class BitMatrix:
    """Square module grid for QR symbols, True = dark module."""

    VALID_SIZES = (21, 25, 29, 33)

    def __init__(self, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
            raise ValueError("bit matrix must be square")
        if bits.shape[0] not in self.VALID_SIZES:
            raise ValueError(f"unsupported symbol size {bits.shape[0]}")
        self.bits = bits

    @property
    def size(self) -> int:
        return self.bits.shape[0]

    @property
    def version(self) -> int:
        return (self.size - 17) // 4

    @classmethod
    def empty(cls, version: int) -> "BitMatrix":
        size = 17 + 4 * version
        return cls(np.zeros((size, size), dtype=bool))

    def __eq__(self, other) -> bool:
        return isinstance(other, BitMatrix) and np.array_equal(self.bits, other.bits)

    def __repr__(self) -> str:
        return f"BitMatrix(size={self.size})"
