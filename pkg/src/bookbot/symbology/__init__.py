"""Symbology codecs: EAN-13 scanlines and QR module matrices."""

from .ean13 import (
    BadCheckDigit,
    ChecksumMismatch,
    InvalidDigitCount,
    NoSymbolFound,
    decode_ean13,
    ean13_check_digit,
    encode_ean13,
)
from .gf256 import CapacityExceeded, Gf256Poly, TooManyErrors, rs_decode, rs_encode
from .qr import (
    EC_LEVELS,
    FormatInfoUnreadable,
    PayloadTooLarge,
    UnsupportedMode,
    UnsupportedVersion,
    byte_capacity,
    decode_qr,
    encode_qr,
)
from .scan import BitMatrix, ScanResult, SymbolType

__all__ = [
    "BadCheckDigit", "BitMatrix", "CapacityExceeded", "ChecksumMismatch",
    "EC_LEVELS", "FormatInfoUnreadable", "Gf256Poly", "InvalidDigitCount",
    "NoSymbolFound", "PayloadTooLarge", "ScanResult", "SymbolType",
    "TooManyErrors", "UnsupportedMode", "UnsupportedVersion",
    "byte_capacity", "decode_ean13", "decode_qr", "ean13_check_digit",
    "encode_ean13", "encode_qr", "rs_decode", "rs_encode",
]
