"""TOM: per-node time-out management on the node-local clock.

Deadlines are expressed in local milliseconds and fire on a tick grid
(default 1 ms): a deadline fires at the first tick not earlier than it.
Timeouts due on the same tick fire in (deadline, tag, id) order, which is
what makes simultaneous watchdog expiries come out in watchdog-id order.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from relsim.sim.clock import ClockModel
from relsim.sim.kernel import Kernel


class UnknownTimeout(KeyError):
    pass


@dataclass
class Timeout:
    id: int
    deadline: float
    tag: int = 0
    period: float | None = None

    @property
    def cyclic(self) -> bool:
        return self.period is not None


Callback = Callable[[Timeout], None]


class TimeoutManager:
    def __init__(self, kernel: Kernel, clock: ClockModel, node: int, tick: float = 1.0):
        self.kernel = kernel
        self.clock = clock
        self.node = node
        self.tick = tick
        self.alive = True
        self._next_id = 1
        self._live: dict[int, tuple[Timeout, Callback, int]] = {}
        self._heap: list[tuple[float, float, int, int, int]] = []
        self._armed: set[float] = set()

    def now(self) -> float:
        return self.clock.local(self.node, self.kernel.now)

    def __contains__(self, tid: int) -> bool:
        return tid in self._live

    def pending(self) -> list[Timeout]:
        return [t for t, _, _ in self._live.values()]

    def _quantize(self, deadline: float) -> float:
        return math.ceil(deadline / self.tick - 1e-9) * self.tick

    def _push(self, t: Timeout, gen: int) -> None:
        fire = self._quantize(t.deadline)
        heapq.heappush(self._heap, (fire, t.deadline, t.tag, t.id, gen))
        if fire not in self._armed:
            self._armed.add(fire)
            when = max(self.kernel.now, self.clock.global_time(self.node, fire))
            self.kernel.call_at(when, self.node, lambda: self._wake(fire))

    def schedule(self, deadline: float, callback: Callback, tag: int = 0,
                 period: float | None = None) -> Timeout:
        t = Timeout(self._next_id, deadline, tag, period)
        self._next_id += 1
        self.schedule_timeout(t, callback)
        return t

    def schedule_timeout(self, t: Timeout, callback: Callback) -> None:
        if t.deadline <= self.now():
            raise ValueError(f"timeout {t.id}: deadline {t.deadline} is not in the future")
        if t.period is not None and t.period <= 0:
            raise ValueError("cyclic period must be positive")
        if t.id in self._live:
            raise ValueError(f"timeout id {t.id} already scheduled")
        self._next_id = max(self._next_id, t.id + 1)
        self._live[t.id] = (t, callback, 0)
        self._push(t, 0)

    def cancel(self, tid: int) -> None:
        if tid not in self._live:
            raise UnknownTimeout(tid)
        del self._live[tid]

    def renew(self, tid: int, new_deadline: float) -> None:
        if tid not in self._live:
            raise UnknownTimeout(tid)
        if new_deadline <= self.now():
            raise ValueError(f"timeout {tid}: deadline {new_deadline} is not in the future")
        t, cb, gen = self._live[tid]
        t.deadline = new_deadline
        self._live[tid] = (t, cb, gen + 1)
        self._push(t, gen + 1)

    def stop(self) -> None:
        """Drop every pending timeout (node crash or reboot)."""
        self.alive = False
        self._live.clear()
        self._heap.clear()

    def _wake(self, tick: float) -> None:
        self._armed.discard(tick)
        while self.alive and self._heap and self._heap[0][0] <= tick:
            _, _, _, tid, gen = heapq.heappop(self._heap)
            entry = self._live.get(tid)
            if entry is None or entry[2] != gen:
                continue
            t, cb, _ = entry
            fired = Timeout(t.id, t.deadline, t.tag, t.period)
            if t.cyclic:
                t.deadline += t.period
                self._live[tid] = (t, cb, gen + 1)
                self._push(t, gen + 1)
            else:
                del self._live[tid]
            cb(fired)
