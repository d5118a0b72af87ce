"""EAN-13 barcode encoder and scanline decoder.

The encoder produces an idealized luminance scanline (0 = black bar,
255 = white) and doubles as the round-trip oracle for the decoder.  The
decoder works on run lengths, recovers the module width from the start
guard, and handles reversed scans via the left-half parity pattern.
"""

from __future__ import annotations

from .scan import ScanResult, SymbolType


class InvalidDigitCount(ValueError):
    pass

class BadCheckDigit(ValueError):
    pass

class NoSymbolFound(ValueError):
    pass

class ChecksumMismatch(ValueError):
    pass


# 7-module bar patterns for the left odd-parity ("L") digit set.
_L_CODES = (
    "0001101", "0011001", "0010011", "0111101", "0100011",
    "0110001", "0101111", "0111011", "0110111", "0001011",
)
# Right set is the bitwise complement, even-parity set its reverse.
_R_CODES = tuple("".join("1" if c == "0" else "0" for c in p) for p in _L_CODES)
_G_CODES = tuple(p[::-1] for p in _R_CODES)

# Parity layout of the six left digits selects the (implicit) first digit.
_PARITY_PATTERNS = (
    "LLLLLL", "LLGLGG", "LLGGLG", "LLGGGL", "LGLLGG",
    "LGGLLG", "LGGGLL", "LGLGLG", "LGLGGL", "LGGLGL",
)

_START_GUARD = "101"
_CENTER_GUARD = "01010"
_END_GUARD = "101"

_LEFT_LOOKUP = {p: (d, "L") for d, p in enumerate(_L_CODES)}
_LEFT_LOOKUP.update({p: (d, "G") for d, p in enumerate(_G_CODES)})
_RIGHT_LOOKUP = {p: d for d, p in enumerate(_R_CODES)}
_FIRST_DIGIT = {p: d for d, p in enumerate(_PARITY_PATTERNS)}

QUIET_ZONE_MODULES = 9


def ean13_check_digit(digits) -> int:
    """Check digit for 12 leading digits (odd positions weight 1, even 3)."""
    ds = _as_digits(digits)
    if len(ds) != 12:
        raise InvalidDigitCount(f"need 12 digits, got {len(ds)}")
    weighted = sum(d * (1 if i % 2 == 0 else 3) for i, d in enumerate(ds))
    return (10 - weighted % 10) % 10


def _as_digits(value) -> list[int]:
    if isinstance(value, str):
        if not value.isdigit():
            raise ValueError(f"non-digit characters in {value!r}")
        return [int(c) for c in value]
    ds = [int(d) for d in value]
    if any(not 0 <= d <= 9 for d in ds):
        raise ValueError("digits must be 0-9")
    return ds


def modules_for(digits13: str) -> str:
    """95-character module string ('1' = bar) for a full 13-digit code."""
    ds = _as_digits(digits13)
    if len(ds) != 13:
        raise InvalidDigitCount(f"need 13 digits, got {len(ds)}")
    if ds[12] != ean13_check_digit(ds[:12]):
        raise BadCheckDigit(f"check digit of {digits13} should be {ean13_check_digit(ds[:12])}")
    parity = _PARITY_PATTERNS[ds[0]]
    out = [_START_GUARD]
    for d, p in zip(ds[1:7], parity):
        out.append(_L_CODES[d] if p == "L" else _G_CODES[d])
    out.append(_CENTER_GUARD)
    for d in ds[7:13]:
        out.append(_R_CODES[d])
    out.append(_END_GUARD)
    return "".join(out)


def encode_ean13(digits13: str, module_width: int = 1,
                 quiet_modules: int = QUIET_ZONE_MODULES) -> bytes:
    """Render a code to a luminance scanline (0 = black, 255 = white)."""
    if module_width < 1:
        raise ValueError("module width must be >= 1 px")
    if quiet_modules < QUIET_ZONE_MODULES:
        raise ValueError(f"quiet zone must be >= {QUIET_ZONE_MODULES} modules")
    pattern = modules_for(digits13)
    quiet = "0" * quiet_modules
    line = bytearray()
    for bit in quiet + pattern + quiet:
        level = 0 if bit == "1" else 255
        line.extend([level] * module_width)
    return bytes(line)


def _runs(binary: list[bool]) -> list[tuple[bool, int, int]]:
    """(is_black, start_index, length) runs of a binarized scanline."""
    runs = []
    start = 0
    for i in range(1, len(binary) + 1):
        if i == len(binary) or binary[i] != binary[start]:
            runs.append((binary[start], start, i - start))
            start = i
    return runs


def _binarize(scanline: bytes) -> list[bool]:
    lo, hi = min(scanline), max(scanline)
    threshold = (lo + hi) / 2
    return [p < threshold for p in scanline]


class _StructureError(Exception):
    """Internal: candidate position did not parse as a symbol."""


def _read_digits(mruns: list[int], lookup, first_black: bool):
    """Six digits of 4 runs each; returns digits plus parity letters."""
    digits = []
    parities = []
    for k in range(6):
        quad = mruns[k * 4:k * 4 + 4]
        if sum(quad) != 7:
            raise _StructureError
        bits = []
        color = first_black
        for m in quad:
            bits.append(("1" if color else "0") * m)
            color = not color
        pattern = "".join(bits)
        if pattern not in lookup:
            raise _StructureError
        entry = lookup[pattern]
        if isinstance(entry, tuple):
            digits.append(entry[0])
            parities.append(entry[1])
        else:
            digits.append(entry)
    return digits, parities


def _try_decode(binary: list[bool]):
    runs = _runs(binary)
    for idx in range(len(runs) - 58):
        color, start, _ = runs[idx]
        if not color:
            continue
        guard = runs[idx:idx + 3]
        width = sum(r[2] for r in guard) / 3.0
        if width < 1:
            continue
        if any(not (0.5 * width <= r[2] <= 1.5 * width) for r in guard):
            continue
        # quiet zone of at least one module before the first bar
        if idx == 0 or runs[idx - 1][2] < width * 0.5:
            continue
        symbol = runs[idx:idx + 59]
        if len(symbol) < 59:
            continue
        expected_color = True
        mruns = []
        ok = True
        for color_r, _, length in symbol:
            if color_r != expected_color:
                ok = False
                break
            expected_color = not expected_color
            mruns.append(max(1, round(length / width)))
        if not ok or sum(mruns) != 95:
            continue
        if mruns[0:3] != [1, 1, 1] or mruns[27:32] != [1, 1, 1, 1, 1] or mruns[56:59] != [1, 1, 1]:
            continue
        end_run = runs[idx + 58]
        end_px = end_run[1] + end_run[2]
        # a bar following a sub-module gap means this was not the end guard
        if idx + 60 < len(runs) and runs[idx + 59][2] < width * 0.5:
            continue
        try:
            left, parities = _read_digits(mruns[3:27], _LEFT_LOOKUP, first_black=False)
            right, _ = _read_digits(mruns[32:56], _RIGHT_LOOKUP, first_black=True)
        except _StructureError:
            continue
        parity = "".join(parities)
        if parity not in _FIRST_DIGIT:
            continue
        digits = [_FIRST_DIGIT[parity]] + left + right
        return digits, start, end_px
    return None


def decode_ean13(scanline: bytes) -> ScanResult:
    """Decode one EAN-13 symbol from a luminance scanline.

    Tries the reversed orientation when the forward read fails; raises
    NoSymbolFound if neither direction contains a guard-delimited symbol,
    ChecksumMismatch if a symbol was read but its check digit is wrong.
    """
    if len(scanline) == 0:
        raise NoSymbolFound("empty scanline")
    binary = _binarize(bytes(scanline))
    n = len(binary)
    attempt = _try_decode(binary)
    reversed_hit = False
    if attempt is None:
        attempt = _try_decode(binary[::-1])
        reversed_hit = attempt is not None
    if attempt is None:
        raise NoSymbolFound("no EAN-13 guard structure located")
    digits, start_px, end_px = attempt
    if reversed_hit:
        start_px, end_px = n - end_px, n - start_px
    if digits[12] != ean13_check_digit(digits[:12]):
        raise ChecksumMismatch("symbol read but check digit does not verify")
    text = "".join(str(d) for d in digits)
    rect = (start_px, 0, end_px - start_px, 1)
    polygon = ((start_px, 0), (end_px - 1, 0))
    return ScanResult(text.encode("ascii"), SymbolType.EAN13, rect, polygon)
