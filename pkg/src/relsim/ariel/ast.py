"""Syntax tree for guarded recovery actions and basic-tool configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from relsim.entities import EntityRef, PredKind, Verb


@dataclass(frozen=True)
class Pred:
    kind: PredKind
    entity: EntityRef


@dataclass(frozen=True)
class PhaseEq:
    entity: EntityRef
    phase: int


@dataclass(frozen=True)
class And:
    left: "Guard"
    right: "Guard"


@dataclass(frozen=True)
class Or:
    left: "Guard"
    right: "Guard"


@dataclass(frozen=True)
class Not:
    operand: "Guard"


Guard = Union[Pred, PhaseEq, And, Or, Not]


@dataclass(frozen=True)
class Action:
    """A primitive recovery command; ``payload`` is only set for SEND."""

    verb: Verb
    target: EntityRef
    payload: int | None = None


@dataclass(frozen=True)
class If:
    guard: Guard
    then: tuple["Stmt", ...] = ()
    orelse: tuple["Stmt", ...] = ()


Stmt = Union[Action, If]


@dataclass(frozen=True)
class WatchdogConfig:
    wid: int
    watched: EntityRef
    period_ms: int
    warn_target: EntityRef


@dataclass(frozen=True)
class ReplicatedGroupConfig:
    group: EntityRef
    members: tuple[EntityRef, ...]
    voting: str = "majority"


BTConfig = Union[WatchdogConfig, ReplicatedGroupConfig]


@dataclass
class Script:
    """Result of parsing: top-level guarded actions plus BT configurations."""

    recovery: list[If] = field(default_factory=list)
    configs: list[BTConfig] = field(default_factory=list)
    includes: list[str] = field(default_factory=list)
    missing_includes: list[tuple[str, int]] = field(default_factory=list)

    @property
    def watchdogs(self) -> list[WatchdogConfig]:
        return [c for c in self.configs if isinstance(c, WatchdogConfig)]

    @property
    def groups(self) -> list[ReplicatedGroupConfig]:
        return [c for c in self.configs if isinstance(c, ReplicatedGroupConfig)]


def guard_entities(g: Guard) -> set[EntityRef]:
    if isinstance(g, (Pred, PhaseEq)):
        return {g.entity}
    if isinstance(g, Not):
        return guard_entities(g.operand)
    return guard_entities(g.left) | guard_entities(g.right)
