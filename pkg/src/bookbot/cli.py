"""Command line entry point: serve the gateway, run the codecs, mint
student tokens, replay an event store, sanity-check scenario files."""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import symbology
from .circulation import mint_token, replay as replay_store
from .gateway import Gateway, GatewayConfig, ScenarioError, load_scenario
from .gateway.app import TOKEN_ENV_DEFAULT
from .symbology import pnm


def _parse_listen(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise argparse.ArgumentTypeError("listen address must be host:port")
    return host, int(port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bookbot",
                                     description="simulated library book bot")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the gateway")
    serve.add_argument("--listen", type=_parse_listen, default=("127.0.0.1", 8080),
                       help="HTTP address, host:port (default 127.0.0.1:8080)")
    serve.add_argument("--teleop-port", type=int, default=9443)
    serve.add_argument("--scenario", required=True, type=Path)
    serve.add_argument("--store", required=True, type=Path,
                       help="append-only event log path")
    serve.add_argument("--seed", type=int, default=None,
                       help="deterministic mode: fixed RNG and clock origin")
    serve.add_argument("--token-env", default=TOKEN_ENV_DEFAULT)
    serve.add_argument("--assets", type=Path, default=None,
                       help="console static asset directory")
    serve.add_argument("--script", type=Path, default=None,
                       help="scripted command file (tick verb args)")
    serve.add_argument("--ticks", type=int, default=None,
                       help="stop after this many simulation ticks")
    serve.add_argument("--no-realtime", action="store_true",
                       help="run the clock as fast as possible")

    codec = sub.add_parser("codec", help="symbology encode/decode")
    codec_sub = codec.add_subparsers(dest="codec_command", required=True)

    enc13 = codec_sub.add_parser("encode-ean13")
    enc13.add_argument("digits13")
    enc13.add_argument("-o", "--out", type=Path, default=None)
    enc13.add_argument("--module-width", type=int, default=2)

    dec13 = codec_sub.add_parser("decode-ean13")
    dec13.add_argument("file", type=Path)

    encqr = codec_sub.add_parser("encode-qr")
    encqr.add_argument("payload")
    encqr.add_argument("--version", type=int, required=True, choices=(1, 2, 3, 4))
    encqr.add_argument("--ec", required=True, choices=("L", "M", "Q", "H"))
    encqr.add_argument("-o", "--out", type=Path, default=None)

    decqr = codec_sub.add_parser("decode-qr")
    decqr.add_argument("file", type=Path)

    mint = sub.add_parser("mint-token", help="mint a student QR token")
    mint.add_argument("--student", required=True)
    mint.add_argument("--ttl", type=int, default=3600, help="lifetime in seconds")
    mint.add_argument("--token-env", default=TOKEN_ENV_DEFAULT)

    rep = sub.add_parser("replay", help="rebuild state from an event store")
    rep.add_argument("--store", required=True, type=Path)
    rep.add_argument("--scenario", required=True, type=Path)
    rep.add_argument("--token-env", default=TOKEN_ENV_DEFAULT)

    check = sub.add_parser("scenario-check", help="validate a scenario file")
    check.add_argument("file", type=Path)
    return parser


def _secret_from_env(env_var: str, scenario_token: str = "") -> str:
    token = os.environ.get(env_var) or scenario_token
    if not token:
        raise ScenarioError(f"set {env_var} (32 characters)")
    if len(token) != 32:
        raise ScenarioError("auth token must be exactly 32 characters")
    return token


def _cmd_serve(args) -> int:
    host, port = args.listen
    config = GatewayConfig(
        scenario_path=args.scenario, store_path=args.store,
        listen_host=host, listen_port=port, teleop_port=args.teleop_port,
        seed=args.seed, assets_dir=args.assets, script_path=args.script,
        max_ticks=args.ticks, realtime=not args.no_realtime)
    gateway = Gateway(config, env_var=args.token_env)
    gateway.start()
    print(f"listening on http://{host}:{gateway.http_port} "
          f"(teleop tcp {gateway.teleop_port})", flush=True)
    try:
        gateway.wait()
    except KeyboardInterrupt:
        pass
    finally:
        gateway.stop()
    return 0


def _cmd_codec(args) -> int:
    if args.codec_command == "encode-ean13":
        line = symbology.encode_ean13(args.digits13, module_width=args.module_width)
        out = args.out or Path(f"{args.digits13}.pgm")
        pnm.write_pgm(out, np.frombuffer(line, dtype=np.uint8))
        print(out)
    elif args.codec_command == "decode-ean13":
        grid = pnm.read_pgm(args.file)
        result = symbology.decode_ean13(bytes(grid[grid.shape[0] // 2]))
        print(result.text())
    elif args.codec_command == "encode-qr":
        matrix = symbology.encode_qr(args.payload.encode("utf-8"),
                                     args.version, args.ec)
        out = args.out or Path("qr.pbm")
        pnm.write_pbm(out, matrix.bits)
        print(out)
    elif args.codec_command == "decode-qr":
        result = symbology.decode_qr(pnm.read_pbm(args.file))
        print(result.text())
    return 0


def _cmd_mint(args) -> int:
    secret = _secret_from_env(args.token_env)
    print(mint_token(args.student, int(time.time()) + args.ttl, secret))
    return 0


def _cmd_replay(args) -> int:
    scenario = load_scenario(args.scenario)
    secret = _secret_from_env(args.token_env, scenario.token)
    service = replay_store(scenario.roster, scenario.catalog, scenario.loans,
                           secret, args.store, bot_id=scenario.bot_id)
    print(f"loans ({len(service.loans)}):")
    for loan in sorted(service.loans.values(), key=lambda l: l.loan_id):
        print(f"  {loan.loan_id}  {loan.student_id:<14} {loan.barcode}  "
              f"{loan.status:<9} renewals={loan.renewal_count}")
    held = service.held_barcodes
    print(f"inventory: {len(held)} book(s), {service.inventory_weight_g} g")
    for barcode in held:
        print(f"  {barcode}  {service.catalog[barcode].title}")
    return 0


def _cmd_check(args) -> int:
    scenario = load_scenario(args.file)
    print(f"ok: world {scenario.world.bounds}, "
          f"{len(scenario.world.obstacles)} obstacle(s), "
          f"{len(scenario.roster)} student(s), {len(scenario.catalog)} book(s), "
          f"{len(scenario.loans)} loan(s)")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("BOOKBOT_LOG", "WARNING"),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    handlers = {
        "serve": _cmd_serve,
        "codec": _cmd_codec,
        "mint-token": _cmd_mint,
        "replay": _cmd_replay,
        "scenario-check": _cmd_check,
    }
    try:
        return handlers[args.command](args)
    except (ScenarioError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
