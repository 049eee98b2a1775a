"""Single-threaded discrete-event kernel with a deterministic total order."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Any, Callable


class EmptyQueue(Exception):
    pass


class ScheduleInPast(ValueError):
    pass


@dataclass(order=True)
class SimEvent:
    time: float
    node: int
    counter: int = 0
    kind: str = field(default="", compare=False)
    payload: Any = field(default=None, compare=False)

    @property
    def tiebreak(self) -> tuple[int, int]:
        return (self.node, self.counter)


class Kernel:
    """Events run in (time, node, insertion counter) order.

    ``handler`` receives every event popped by :meth:`advance`; events whose
    payload is a callable with kind ``"call"`` are invoked directly instead.
    """

    def __init__(self, handler: Callable[[SimEvent], None] | None = None):
        self.now = 0.0
        self._queue: list[SimEvent] = []
        self._counter = 0
        self.handler = handler

    def __len__(self) -> int:
        return len(self._queue)

    def schedule(self, time: float, node: int, kind: str, payload: Any = None) -> SimEvent:
        if time < self.now:
            raise ScheduleInPast(f"event at {time} scheduled while now={self.now}")
        ev = SimEvent(time, node, self._counter, kind, payload)
        self._counter += 1
        heapq.heappush(self._queue, ev)
        return ev

    def call_at(self, time: float, node: int, fn: Callable[[], None]) -> SimEvent:
        return self.schedule(time, node, "call", fn)

    def peek_time(self) -> float | None:
        return self._queue[0].time if self._queue else None

    def advance(self) -> SimEvent:
        if not self._queue:
            raise EmptyQueue("no events left")
        ev = heapq.heappop(self._queue)
        self.now = ev.time
        if ev.kind == "call":
            ev.payload()
        elif self.handler is not None:
            self.handler(ev)
        return ev

    def run(self, until: float | None = None) -> int:
        """Advance until the queue drains or the next event lies beyond ``until``."""
        n = 0
        while self._queue and (until is None or self._queue[0].time <= until):
            self.advance()
            n += 1
        if until is not None and until > self.now:
            self.now = until
        return n
