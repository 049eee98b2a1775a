"""Drifting node-local hardware clocks: local = (1 + drift) * global."""

from __future__ import annotations

import random
from dataclasses import dataclass, field


@dataclass
class ClockModel:
    rho: float = 1e-3
    drift: dict[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for n, d in self.drift.items():
            if abs(d) > self.rho:
                raise ValueError(f"node {n}: |drift| {d} exceeds rho {self.rho}")

    @classmethod
    def seeded(cls, nodes, rho: float, seed: int, overrides: dict[int, float] | None = None) -> "ClockModel":
        rng = random.Random(f"clock:{seed}")
        drift = {n: rng.uniform(-rho, rho) for n in nodes}
        drift.update(overrides or {})
        return cls(rho, drift)

    def local(self, node: int, t: float) -> float:
        return (1.0 + self.drift.get(node, 0.0)) * t

    def global_time(self, node: int, local: float) -> float:
        return local / (1.0 + self.drift.get(node, 0.0))


def local_clock(clock: ClockModel, node: int, global_now: float) -> float:
    return clock.local(node, global_now)
