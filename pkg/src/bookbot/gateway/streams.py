"""Fan-out of text items (telemetry documents, NMEA lines) to stream
subscribers; a slow subscriber loses the oldest items, never blocks."""

from __future__ import annotations

import collections
import threading


class StreamBroadcaster:
    def __init__(self, depth: int = 64):
        self._depth = depth
        self._lock = threading.Lock()
        self._subscribers: list[_Subscription] = []

    def subscribe(self) -> "_Subscription":
        sub = _Subscription(self._depth)
        with self._lock:
            self._subscribers.append(sub)
        return sub

    def unsubscribe(self, sub: "_Subscription") -> None:
        with self._lock:
            if sub in self._subscribers:
                self._subscribers.remove(sub)

    def publish(self, item: str) -> None:
        with self._lock:
            subs = list(self._subscribers)
        for sub in subs:
            sub._offer(item)


class _Subscription:
    def __init__(self, depth: int):
        self._items: collections.deque[str] = collections.deque(maxlen=depth)
        self._ready = threading.Event()

    def _offer(self, item: str) -> None:
        self._items.append(item)
        self._ready.set()

    def get(self, timeout: float = 0.5) -> str | None:
        if not self._items:
            self._ready.wait(timeout)
        self._ready.clear()
        try:
            return self._items.popleft()
        except IndexError:
            return None
