"""Append-only document log: one JSON object per line.

Appends are write+flush per line; replay tolerates a torn trailing line
(truncated with a warning) but treats any earlier malformed line as
corruption.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

from .models import CorruptLog

log = logging.getLogger(__name__)


def encode_document(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


class EventLog:
    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "ab")

    def append(self, doc: dict) -> None:
        self._fh.write(encode_document(doc) + b"\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_events(path) -> list[dict]:
    """All documents in the log, oldest first."""
    path = Path(path)
    if not path.exists():
        return []
    raw = path.read_bytes()
    if not raw:
        return []
    complete, _, tail = raw.rpartition(b"\n")
    if tail:
        log.warning("discarding torn trailing line (%d bytes) in %s", len(tail), path)
    docs = []
    lines = complete.split(b"\n") if complete else []
    for i, line in enumerate(lines):
        if not line:
            continue
        try:
            docs.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise CorruptLog(f"malformed document on line {i + 1}: {exc}") from None
    return docs
