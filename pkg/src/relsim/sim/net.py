"""Datagram service with omission and performance failures, partitions and isolation."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Datagram:
    kind: str
    src: int
    dst: int
    payload: Any = None
    src_task: int | None = None
    dst_task: int | None = None


@dataclass(frozen=True)
class NetModel:
    d_min: float = 1.0
    d_max: float = 10.0
    p_omit: float = 0.0
    p_late: float = 0.0
    late_factor: float = 5.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.d_min <= self.d_max:
            raise ValueError("need 0 <= d_min <= d_max")
        for p in (self.p_omit, self.p_late):
            if not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")
        if self.late_factor <= 1.0:
            raise ValueError("late_factor must exceed 1")


@dataclass(frozen=True)
class PartitionWindow:
    start: float
    end: float
    blocks: tuple[frozenset[int], ...]


@dataclass
class PartitionSchedule:
    windows: list[PartitionWindow] = field(default_factory=list)

    def add(self, start: float, end: float, blocks, nodes=None) -> None:
        blocks = tuple(frozenset(b) for b in blocks)
        if end <= start:
            raise ValueError("partition window must have end > start")
        seen: set[int] = set()
        for b in blocks:
            if seen & b:
                raise ValueError("partition blocks must be disjoint")
            seen |= b
        if nodes is not None and seen != set(nodes):
            raise ValueError("partition blocks must cover every node")
        self.windows.append(PartitionWindow(start, end, blocks))

    def blocks_at(self, t: float) -> tuple[frozenset[int], ...] | None:
        """Blocks of the latest-starting window active at ``t``; None when healed."""
        active = [w for w in self.windows if w.start <= t < w.end]
        if not active:
            return None
        return max(active, key=lambda w: w.start).blocks

    def connected(self, a: int, b: int, t: float) -> bool:
        blocks = self.blocks_at(t)
        if blocks is None or a == b:
            return True
        return any(a in blk and b in blk for blk in blocks)


@dataclass(frozen=True)
class Decision:
    delivered: bool
    at: float | None = None
    reason: str = ""


class Network:
    """Per-channel seeded delivery decisions.

    Each (src, dst) channel owns its own generator and every send draws the
    same three numbers whatever the outcome, so traffic on one channel never
    shifts the decisions taken on another.
    """

    def __init__(self, model: NetModel | None = None, partitions: PartitionSchedule | None = None):
        self.model = model or NetModel()
        self.partitions = partitions or PartitionSchedule()
        self.isolated_tasks: set[int] = set()
        self.isolated_nodes: set[int] = set()
        self._rngs: dict[tuple[int, int], random.Random] = {}

    def _rng(self, src: int, dst: int) -> random.Random:
        key = (src, dst)
        if key not in self._rngs:
            self._rngs[key] = random.Random(f"net:{self.model.seed}:{src}:{dst}")
        return self._rngs[key]

    def isolated(self, dg: Datagram) -> bool:
        return (dg.src in self.isolated_nodes or dg.dst in self.isolated_nodes
                or dg.src_task in self.isolated_tasks or dg.dst_task in self.isolated_tasks)

    def send_datagram(self, dg: Datagram, now: float) -> Decision:
        m = self.model
        rng = self._rng(dg.src, dg.dst)
        u_omit, u_late, u_delay = rng.random(), rng.random(), rng.random()
        if self.isolated(dg):
            return Decision(False, reason="isolated")
        if not self.partitions.connected(dg.src, dg.dst, now):
            return Decision(False, reason="partition")
        if u_omit < m.p_omit:
            return Decision(False, reason="omission")
        if u_late < m.p_late:
            return Decision(True, now + m.d_max * m.late_factor, "late")
        return Decision(True, now + m.d_min + (m.d_max - m.d_min) * u_delay)
