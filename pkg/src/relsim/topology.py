"""Static system layout: nodes, task placement, groups, spares."""

from __future__ import annotations

from dataclasses import dataclass, field

from relsim.entities import EntityKind, EntityRef, group, node, task
from relsim.vm import EntityState


@dataclass
class Topology:
    nodes: list[int]
    hosts: dict[int, int] = field(default_factory=dict)  # task id -> node id
    groups: dict[int, tuple[int, ...]] = field(default_factory=dict)
    spares: set[int] = field(default_factory=set)  # tasks dormant until STARTed

    def __post_init__(self) -> None:
        for t, n in self.hosts.items():
            if n not in self.nodes:
                raise ValueError(f"task {t} placed on unknown node {n}")
        for g, members in self.groups.items():
            for m in members:
                if m not in self.hosts:
                    raise ValueError(f"group {g} lists unknown task {m}")

    def knows(self, e: EntityRef) -> bool:
        if e.kind is EntityKind.NODE:
            return e.id in self.nodes
        if e.kind is EntityKind.TASK:
            return e.id in self.hosts
        return e.id in self.groups

    def home(self, e: EntityRef) -> int | None:
        """Node whose backbone component executes commands on ``e``."""
        if e.kind is EntityKind.NODE:
            return e.id if e.id in self.nodes else None
        if e.kind is EntityKind.TASK:
            return self.hosts.get(e.id)
        return None

    def tasks_on(self, n: int) -> list[int]:
        return sorted(t for t, h in self.hosts.items() if h == n)

    def members(self, g: int) -> tuple[int, ...]:
        return self.groups.get(g, ())

    def expand(self, e: EntityRef) -> list[EntityRef]:
        """Groups stand for their member tasks; other entities for themselves."""
        if e.kind is EntityKind.GROUP:
            return [task(m) for m in self.members(e.id)]
        return [e]

    def initial_states(self) -> dict[EntityRef, EntityState]:
        states = {node(n): EntityState(active=True) for n in self.nodes}
        for t in self.hosts:
            states[task(t)] = EntityState(active=t not in self.spares)
        for g in self.groups:
            states[group(g)] = EntityState(active=True)
        return states
