"""Student QR token: "BB1|<id>|<expiry_unix>|<mac16>" with an HMAC tail."""

from __future__ import annotations

import hashlib
import hmac

from .models import BadMac, MalformedToken, TokenExpired

PREFIX = "BB1"
MAC_HEX_LEN = 16  # first 8 HMAC-SHA-256 bytes, hex encoded


def _mac(base: str, secret: str) -> str:
    digest = hmac.new(secret.encode("utf-8"), base.encode("utf-8"),
                      hashlib.sha256).digest()
    return digest[:MAC_HEX_LEN // 2].hex()


def mint_token(student_id: str, expiry_unix: int, secret: str) -> str:
    if "|" in student_id:
        raise ValueError("student id must not contain '|'")
    base = f"{PREFIX}|{student_id}|{int(expiry_unix)}"
    return f"{base}|{_mac(base, secret)}"


def verify_token(token: str, now_ms: int, secret: str) -> tuple[str, int]:
    """Returns (student_id, expiry_unix) or raises a token error."""
    parts = token.split("|")
    if len(parts) != 4 or parts[0] != PREFIX:
        raise MalformedToken("token must have 4 '|' fields starting with BB1")
    _, student_id, expiry_text, mac = parts
    if not student_id or not expiry_text.isdigit() or len(mac) != MAC_HEX_LEN:
        raise MalformedToken("bad token field shapes")
    base = f"{PREFIX}|{student_id}|{expiry_text}"
    if not hmac.compare_digest(mac.lower(), _mac(base, secret)):
        raise BadMac("token MAC does not verify")
    expiry = int(expiry_text)
    if expiry * 1000 <= now_ms:
        raise TokenExpired(f"token expired at {expiry}")
    return student_id, expiry
