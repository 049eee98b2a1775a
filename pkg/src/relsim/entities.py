"""Entity identities and the small closed enumerations shared across modules."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass


class EntityKind(enum.IntEnum):
    NODE = 0
    TASK = 1
    GROUP = 2

    @property
    def letter(self) -> str:
        return self.name[0]


@dataclass(frozen=True, order=True)
class EntityRef:
    kind: EntityKind
    id: int

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"entity id must be non-negative, got {self.id}")
        if not isinstance(self.kind, EntityKind):
            object.__setattr__(self, "kind", EntityKind(self.kind))

    def __str__(self) -> str:
        return f"{self.kind.letter}{self.id}"

    @classmethod
    def parse(cls, text: str) -> "EntityRef":
        """Parse the compact ``T10`` / ``N2`` / ``G3`` form (long names accepted too)."""
        m = _ENTITY_RE.fullmatch(text.strip())
        if m is None:
            raise ValueError(f"not an entity reference: {text!r}")
        word, num = m.groups()
        kind = {"N": EntityKind.NODE, "T": EntityKind.TASK, "G": EntityKind.GROUP}[word[0]]
        return cls(kind, int(num))


_ENTITY_RE = re.compile(r"(NODE|TASK|GROUP|N|T|G)\s*(\d+)")


def node(i: int) -> EntityRef:
    return EntityRef(EntityKind.NODE, i)


def task(i: int) -> EntityRef:
    return EntityRef(EntityKind.TASK, i)


def group(i: int) -> EntityRef:
    return EntityRef(EntityKind.GROUP, i)


class PredKind(enum.Enum):
    FAULTY = "faulty"
    TRANSIENT = "transient"
    ISOLATED = "isolated"
    RESTARTED = "restarted"
    ACTIVE = "active"


class Verb(enum.Enum):
    RESTART = "RESTART"
    TERMINATE = "TERMINATE"
    ISOLATE = "ISOLATE"
    START = "START"
    SEND = "SEND"
    WARN = "WARN"


class ErrorClass(enum.Enum):
    CRASH = "CRASH"
    TRANSIENT_CANDIDATE = "TRANSIENT_CANDIDATE"
    EXCEPTION = "EXCEPTION"
    WD_TIMEOUT = "WD_TIMEOUT"
    MINORITY_VOTE = "MINORITY_VOTE"


# which target kinds each verb accepts
VERB_TARGETS: dict[Verb, frozenset[EntityKind]] = {
    Verb.RESTART: frozenset(EntityKind),
    Verb.TERMINATE: frozenset(EntityKind),
    Verb.START: frozenset(EntityKind),
    Verb.ISOLATE: frozenset({EntityKind.TASK, EntityKind.NODE}),
    Verb.SEND: frozenset({EntityKind.TASK, EntityKind.GROUP}),
    Verb.WARN: frozenset({EntityKind.TASK, EntityKind.GROUP}),
}
