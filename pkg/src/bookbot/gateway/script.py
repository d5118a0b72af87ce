"""Scripted command files: "<tick> <verb> <args...>" lines executed by
the simulation loop at exact ticks, for demos and reproducible runs.

The qr and barcode verbs run the full symbology path (mint, encode,
decode, verify) rather than injecting values directly.
"""

from __future__ import annotations

from pathlib import Path

from ..botsim import dpad_to_motors
from ..circulation import mint_token
from ..symbology import byte_capacity, decode_qr, encode_qr

DEFAULT_TOKEN_TTL_S = 3600


class ScriptError(ValueError):
    pass


def encode_token_qr(token: str):
    """Smallest version 1-4 symbol holding the token at EC level M."""
    payload = token.encode("utf-8")
    for version in (1, 2, 3, 4):
        if len(payload) <= byte_capacity(version, "M"):
            return encode_qr(payload, version, "M")
    raise ScriptError(f"token of {len(payload)} bytes exceeds version 4 capacity")


def _need(args: list[str], count: int, usage: str) -> None:
    if len(args) != count:
        raise ScriptError(f"expected: {usage}")


def _compile(verb: str, args: list[str], secret: str):
    if verb == "drive":
        _need(args, 1, "drive <N|S|E|W|STOP>")
        cmd = dpad_to_motors(args[0])
        return lambda sim: sim._set_motors(cmd)
    if verb == "qr":
        if len(args) not in (1, 2):
            raise ScriptError("expected: qr <student_id> [ttl_s]")
        student_id = args[0]
        ttl = int(args[1]) if len(args) == 2 else DEFAULT_TOKEN_TTL_S

        def fn(sim):
            expiry = sim.clock.now_ms // 1000 + ttl
            token = mint_token(student_id, expiry, secret)
            scan = decode_qr(encode_token_qr(token))
            result = sim.kiosk_open(scan.text())
            sim.script_kiosk_id = result["kiosk_session"]
        return fn
    if verb == "barcode":
        _need(args, 1, "barcode <digits13>")
        digits = args[0]
        return lambda sim: sim.kiosk_barcode(sim.script_kiosk_id, digits)
    if verb == "action":
        _need(args, 2, "action <loan_id> <submit|renew>")
        loan_id, action = args
        if action not in ("submit", "renew"):
            raise ScriptError(f"unknown action {action!r}")
        return lambda sim: sim.kiosk_action(sim.script_kiosk_id, loan_id, action)
    if verb == "dock":
        _need(args, 0, "dock")
        return lambda sim: sim.set_docked(True)
    if verb == "undock":
        _need(args, 0, "undock")
        return lambda sim: sim.set_docked(False)
    if verb == "unload":
        _need(args, 0, "unload")
        return lambda sim: sim.unload()
    raise ScriptError(f"unknown verb {verb!r}")


def load_script(path, secret: str) -> dict[int, list]:
    """Parse a command file into {tick: [callables]}."""
    table: dict[int, list] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2 or not parts[0].isdigit():
            raise ScriptError(f"{path}:{lineno}: lines look like '<tick> <verb> ...'")
        try:
            fn = _compile(parts[1], parts[2:], secret)
        except (ScriptError, ValueError) as exc:
            raise ScriptError(f"{path}:{lineno}: {exc}") from None
        table.setdefault(int(parts[0]), []).append(fn)
    return table
