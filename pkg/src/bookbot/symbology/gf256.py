"""GF(2^8) arithmetic and Reed-Solomon coding over the 0x11D field.

The field is generated by alpha = 2 with primitive polynomial
x^8 + x^4 + x^3 + x^2 + 1 (0x11D), the QR-code convention.  Reed-Solomon
parity uses generator roots alpha^0 .. alpha^(nsym-1).
"""

from __future__ import annotations

PRIMITIVE_POLY = 0x11D
FIELD_SIZE = 256

class CapacityExceeded(ValueError):
    """Message plus parity would not fit in one GF(256) codeword."""

class TooManyErrors(ValueError):
    """Syndrome resolution failed; more errors than the code can correct."""


def _build_tables() -> tuple[list[int], list[int]]:
    exp = [0] * 512
    log = [0] * 256
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & 0x100:
            x ^= PRIMITIVE_POLY
    for i in range(255, 512):
        exp[i] = exp[i - 255]
    return exp, log


_EXP, _LOG = _build_tables()


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return _EXP[_LOG[a] + _LOG[b]]


def gf_div(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("division by zero in GF(256)")
    if a == 0:
        return 0
    return _EXP[(_LOG[a] - _LOG[b]) % 255]


def gf_inverse(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("zero has no inverse in GF(256)")
    return _EXP[255 - _LOG[a]]


def gf_pow(a: int, n: int) -> int:
    if a == 0:
        return 0 if n > 0 else 1
    return _EXP[(_LOG[a] * n) % 255]


class Gf256Poly:
    """Polynomial over GF(256), coefficients highest degree first.

    Normalized so the leading coefficient is nonzero unless the polynomial
    is zero (represented as [0]).
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        coeffs = list(coefficients)
        i = 0
        while i < len(coeffs) - 1 and coeffs[i] == 0:
            i += 1
        self.coefficients = coeffs[i:] or [0]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return self.coefficients == [0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Gf256Poly) and self.coefficients == other.coefficients

    def __repr__(self) -> str:
        return f"Gf256Poly({self.coefficients})"

    def __add__(self, other: "Gf256Poly") -> "Gf256Poly":
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        off = len(a) - len(b)
        for i, c in enumerate(b):
            out[off + i] ^= c
        return Gf256Poly(out)

    def __mul__(self, other: "Gf256Poly") -> "Gf256Poly":
        a, b = self.coefficients, other.coefficients
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] ^= gf_mul(ca, cb)
        return Gf256Poly(out)

    def scale(self, factor: int) -> "Gf256Poly":
        return Gf256Poly([gf_mul(c, factor) for c in self.coefficients])

    def shift(self, n: int) -> "Gf256Poly":
        """Multiply by x^n."""
        if self.is_zero():
            return self
        return Gf256Poly(self.coefficients + [0] * n)

    def divmod(self, divisor: "Gf256Poly") -> tuple["Gf256Poly", "Gf256Poly"]:
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coefficients)
        div = divisor.coefficients
        if len(rem) < len(div):
            return Gf256Poly([0]), Gf256Poly(rem)
        quot = [0] * (len(rem) - len(div) + 1)
        lead_inv = gf_inverse(div[0])
        for i in range(len(quot)):
            coef = rem[i]
            if coef == 0:
                continue
            q = gf_mul(coef, lead_inv)
            quot[i] = q
            for j, dc in enumerate(div):
                rem[i + j] ^= gf_mul(q, dc)
        return Gf256Poly(quot), Gf256Poly(rem[len(quot):] or [0])

    def eval_at(self, x: int) -> int:
        acc = 0
        for c in self.coefficients:
            acc = gf_mul(acc, x) ^ c
        return acc


def rs_generator_poly(nsym: int) -> Gf256Poly:
    """(x - alpha^0)(x - alpha^1)...(x - alpha^(nsym-1))."""
    g = Gf256Poly([1])
    for i in range(nsym):
        g = g * Gf256Poly([1, gf_pow(2, i)])
    return g


def rs_encode(data: bytes, nsym: int) -> bytes:
    """Append nsym Reed-Solomon parity bytes to data."""
    if nsym < 1:
        raise ValueError("nsym must be >= 1")
    if len(data) + nsym > 255:
        raise CapacityExceeded(f"{len(data)} data + {nsym} parity bytes exceed 255")
    gen = rs_generator_poly(nsym)
    _, rem = Gf256Poly(list(data) or [0]).shift(nsym).divmod(gen)
    parity = [0] * (nsym - len(rem.coefficients)) + rem.coefficients
    if rem.is_zero():
        parity = [0] * nsym
    return bytes(data) + bytes(parity)


def _syndromes(codeword: bytes, nsym: int) -> list[int]:
    poly = Gf256Poly(list(codeword))
    return [poly.eval_at(gf_pow(2, i)) for i in range(nsym)]


def _berlekamp_massey(synd: list[int]) -> Gf256Poly:
    # error locator sigma(x) = prod (1 - X_k x); lists highest degree first
    err_loc = [1]
    old_loc = [1]
    for i in range(len(synd)):
        delta = synd[i]
        for j in range(1, len(err_loc)):
            delta ^= gf_mul(err_loc[-(j + 1)], synd[i - j])
        old_loc = old_loc + [0]
        if delta != 0:
            if len(old_loc) > len(err_loc):
                new_loc = [gf_mul(c, delta) for c in old_loc]
                old_loc = [gf_mul(c, gf_inverse(delta)) for c in err_loc]
                err_loc = new_loc
            scaled = [gf_mul(c, delta) for c in old_loc]
            pad = len(scaled) - len(err_loc)
            padded = [0] * pad + err_loc if pad > 0 else err_loc
            scaled = [0] * -pad + scaled if pad < 0 else scaled
            err_loc = [a ^ b for a, b in zip(padded, scaled)]
    return Gf256Poly(err_loc)


def _find_error_positions(sigma: Gf256Poly, nmess: int) -> list[int]:
    # Chien search: sigma(alpha^-i) == 0  <=> error at position i from the end
    positions = []
    for i in range(nmess):
        if sigma.eval_at(gf_pow(2, 255 - i % 255)) == 0:
            positions.append(nmess - 1 - i)
    return positions


def rs_decode(codeword: bytes, nsym: int) -> bytes:
    """Correct up to floor(nsym/2) byte errors; return the data portion.

    Raises TooManyErrors when the syndromes cannot be resolved into a
    consistent error pattern.
    """
    if len(codeword) <= nsym:
        raise ValueError("codeword shorter than parity length")
    synd = _syndromes(codeword, nsym)
    if max(synd) == 0:
        return bytes(codeword[:-nsym])

    sigma = _berlekamp_massey(synd)
    n_errors = sigma.degree
    if n_errors * 2 > nsym:
        raise TooManyErrors(f"locator degree {n_errors} exceeds capacity")
    positions = _find_error_positions(sigma, len(codeword))
    if len(positions) != n_errors:
        raise TooManyErrors("Chien search found wrong number of roots")

    # Forney: omega(x) = [synd(x) * sigma(x)] mod x^nsym, first root alpha^0
    synd_poly = Gf256Poly(list(reversed(synd)))
    omega_full = synd_poly * sigma
    omega = Gf256Poly(omega_full.coefficients[-nsym:] if omega_full.degree >= nsym
                      else omega_full.coefficients)
    sigma_prime_coeffs = []
    # formal derivative: d/dx sum c_k x^k = sum_{k odd} c_k x^(k-1)
    coeffs_low_first = list(reversed(sigma.coefficients))
    for k in range(1, len(coeffs_low_first)):
        if k % 2 == 1:
            sigma_prime_coeffs.append((k - 1, coeffs_low_first[k]))
    corrected = bytearray(codeword)
    n = len(codeword)
    for pos in positions:
        x_k = gf_pow(2, n - 1 - pos)
        x_inv = gf_inverse(x_k)
        num = omega.eval_at(x_inv)
        den = 0
        for k, c in sigma_prime_coeffs:
            den ^= gf_mul(c, gf_pow(x_inv, k))
        if den == 0:
            raise TooManyErrors("Forney denominator vanished")
        # fcr = 0 convention carries a factor X_k in the error magnitude
        magnitude = gf_mul(x_k, gf_div(num, den))
        corrected[pos] ^= magnitude

    if max(_syndromes(bytes(corrected), nsym)) != 0:
        raise TooManyErrors("correction did not zero the syndromes")
    return bytes(corrected[:-nsym])
