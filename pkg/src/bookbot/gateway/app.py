"""Wires scenario, circulation service, simulation loop, teleop listener
and HTTP server into one process."""

from __future__ import annotations

import logging
import os
import time

from ..circulation import EventLog, LibraryService, replay
from ..teleop import TeleopHub, TeleopServer
from .config import GatewayConfig, Scenario, ScenarioError, load_scenario
from .http_api import GatewayHttpServer
from .script import load_script
from .simloop import Simulation
from .streams import StreamBroadcaster

log = logging.getLogger(__name__)

TOKEN_ENV_DEFAULT = "BOOKBOT_TOKEN"


def resolve_token(config_token: str, scenario_token: str, env_var: str) -> str:
    token = os.environ.get(env_var) or config_token or scenario_token
    if not token:
        raise ScenarioError(
            f"no auth token: set {env_var} or a [gateway] token in the scenario")
    if len(token) != 32:
        raise ScenarioError("auth token must be exactly 32 characters")
    return token


class Gateway:
    def __init__(self, config: GatewayConfig, env_var: str = TOKEN_ENV_DEFAULT):
        self.config = config
        self.scenario: Scenario = load_scenario(config.scenario_path)
        self.token = resolve_token(config.token, self.scenario.token, env_var)

        if config.seed is None:
            # free-running mode anchors the logical clock at the wall clock
            self.scenario.start_epoch_ms = int(time.time() * 1000)

        self.event_log = EventLog(config.store_path)
        self.service = LibraryService(
            self.scenario.roster, self.scenario.catalog,
            [l for l in self.scenario.loans],
            secret=self.token, bot_id=self.scenario.bot_id,
            event_log=self.event_log)

        self.telemetry_stream = StreamBroadcaster()
        self.nmea_stream = StreamBroadcaster()

        script = {}
        if config.script_path is not None:
            script = load_script(config.script_path, self.token)

        self.sim = Simulation(
            self.scenario, self.service, seed=config.seed,
            telemetry_stream=self.telemetry_stream, nmea_stream=self.nmea_stream,
            script=script, max_ticks=config.max_ticks, realtime=config.realtime)

        self.hub = TeleopHub(
            self.token,
            on_drive=self.sim.drive,
            on_device_drop=self.sim.stop_motors,
            clock=lambda: self.sim.clock.now_s)
        self.sim.hub = self.hub

        self.teleop_server = TeleopServer("0.0.0.0" if config.listen_host == "0.0.0.0"
                                          else config.listen_host,
                                          config.teleop_port, self.hub)
        self.http_server = GatewayHttpServer(
            config.listen_host, config.listen_port, self.sim,
            self.telemetry_stream, self.nmea_stream, config.assets_dir)

    @property
    def http_port(self) -> int:
        return self.http_server.port

    @property
    def teleop_port(self) -> int:
        return self.teleop_server.port

    def start(self) -> None:
        self.teleop_server.start()
        self.http_server.start()
        self.sim.start()
        log.info("gateway up: http %s:%d teleop %d store %s",
                 self.config.listen_host, self.http_port, self.teleop_port,
                 self.config.store_path)

    def wait(self) -> None:
        """Block until the tick budget runs out (or forever without one)."""
        self.sim.join()
        if self.sim.error is not None:
            raise self.sim.error

    def stop(self) -> None:
        self.sim.stop()
        self.http_server.stop()
        self.teleop_server.stop()
        self.event_log.close()

    def replay_store(self) -> LibraryService:
        return replay(self.scenario.roster, self.scenario.catalog,
                      self.scenario.loans, self.token, self.config.store_path,
                      bot_id=self.scenario.bot_id)
