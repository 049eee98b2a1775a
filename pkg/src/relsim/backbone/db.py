"""The replicated error-notification database.

Every change is a record carried by a :class:`DbDelta`. Entity states are a
pure fold over the stored records taken in (lamport, origin, counter) order,
so any two replicas holding the same set of records hold the same states,
whatever order the records arrived in.
"""

from __future__ import annotations

import bisect
import hashlib
from dataclasses import dataclass, replace
from typing import Union

from relsim.backbone.alpha import AlphaParams, AlphaTrack
from relsim.entities import EntityKind, EntityRef, ErrorClass, task
from relsim.topology import Topology
from relsim.vm import UNKNOWN, EntityState


@dataclass(frozen=True, order=True)
class Seq:
    origin: int
    counter: int

    def __str__(self) -> str:
        return f"{self.origin}:{self.counter}"

    @classmethod
    def parse(cls, text: str) -> "Seq":
        a, b = text.split(":")
        return cls(int(a), int(b))


@dataclass(frozen=True)
class ErrorNotification:
    seq: Seq
    detector: int
    entity: EntityRef
    error_class: ErrorClass
    local_time: float


EFFECT_ACTIONS = frozenset({"RESTART", "TERMINATE", "ISOLATE", "START", "REJOIN", "PHASE"})


@dataclass(frozen=True)
class Effect:
    """A state change applied by a backbone component (command effect, rejoin, phase)."""

    seq: Seq
    action: str
    entity: EntityRef
    local_time: float
    cause: Seq | None = None
    value: int = 0

    def __post_init__(self) -> None:
        if self.action not in EFFECT_ACTIONS:
            raise ValueError(f"unknown effect action {self.action!r}")


@dataclass(frozen=True)
class Handled:
    """Marks a notification as evaluated by RINT on ``executor``."""

    seq: Seq
    trigger: Seq
    executor: int
    commands: int
    local_time: float


Record = Union[ErrorNotification, Effect, Handled]


@dataclass(frozen=True)
class DbDelta:
    record: Record
    lamport: int

    @property
    def seq(self) -> Seq:
        return self.record.seq

    @property
    def notification(self) -> ErrorNotification | None:
        return self.record if isinstance(self.record, ErrorNotification) else None

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.lamport, self.record.seq.origin, self.record.seq.counter)


class NotificationDB:
    def __init__(self, topology: Topology, alpha: AlphaParams | None = None):
        self.topology = topology
        self.alpha_params = alpha or AlphaParams()
        self._deltas: dict[Seq, DbDelta] = {}
        self._keys: list[tuple[int, int, int]] = []
        self._reset()

    def _reset(self) -> None:
        self._states: dict[EntityRef, EntityState] = self.topology.initial_states()
        self._alpha: dict[EntityRef, AlphaTrack] = {}
        self.handled: dict[Seq, Seq] = {}

    # -- queries -----------------------------------------------------------
    def __contains__(self, seq: Seq) -> bool:
        return seq in self._deltas

    def __len__(self) -> int:
        return len(self._deltas)

    def state(self, e: EntityRef) -> EntityState:
        return self._states.get(e, UNKNOWN)

    def snapshot(self) -> dict[EntityRef, EntityState]:
        return dict(self._states)

    def alpha(self, e: EntityRef) -> AlphaTrack:
        return self._alpha.get(e, AlphaTrack())

    def seqs(self) -> frozenset[Seq]:
        return frozenset(self._deltas)

    def deltas(self) -> list[DbDelta]:
        return sorted(self._deltas.values(), key=lambda d: d.key)

    def notifications(self) -> list[ErrorNotification]:
        return [d.record for d in self.deltas() if isinstance(d.record, ErrorNotification)]

    def unhandled(self) -> list[ErrorNotification]:
        return [n for n in self.notifications() if n.seq not in self.handled]

    def missing(self, digest) -> list[DbDelta]:
        return [d for d in self.deltas() if d.seq not in digest]

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        for d in self.deltas():
            h.update(f"{d.seq};".encode())
        for e in sorted(self._states):
            s = self._states[e]
            h.update(f"{e}={int(s.active)}{int(s.faulty)}{int(s.transient)}"
                     f"{int(s.isolated)}{int(s.restarted)}/{s.phase};".encode())
        return h.hexdigest()[:16]

    # -- updates -----------------------------------------------------------
    def merge(self, delta: DbDelta) -> bool:
        """Store ``delta``; False (and no change) when its seq is already held."""
        if delta.seq in self._deltas:
            return False
        self._deltas[delta.seq] = delta
        i = bisect.bisect(self._keys, delta.key)
        self._keys.insert(i, delta.key)
        if i == len(self._keys) - 1:
            self._apply(delta.record)
        else:
            self._reset()
            for d in self.deltas():
                self._apply(d.record)
        return True

    def _set(self, e: EntityRef, **changes) -> None:
        s = replace(self._states.get(e, UNKNOWN), **changes)
        if s.isolated:
            s = replace(s, active=False)
        self._states[e] = s

    def _hosted(self, e: EntityRef) -> list[EntityRef]:
        if e.kind is EntityKind.NODE:
            return [task(t) for t in self.topology.tasks_on(e.id)]
        return []

    def _apply(self, rec: Record) -> None:
        if isinstance(rec, Handled):
            self.handled[rec.trigger] = rec.seq
        elif isinstance(rec, ErrorNotification):
            e = rec.entity
            track = self.alpha(e)
            track = replace(track, count=replace(track.count, K=self.alpha_params.K, T=self.alpha_params.T))
            track = track.feed_error(rec.local_time, self.alpha_params.period)
            self._alpha[e] = track
            crash = rec.error_class is ErrorClass.CRASH
            self._set(e, faulty=True, restarted=False, transient=track.count.transient,
                      active=self.state(e).active and not crash)
            if crash:
                for t in self._hosted(e):
                    self._set(t, active=False)
        else:
            self._apply_effect(rec)

    def _apply_effect(self, rec: Effect) -> None:
        e, action = rec.entity, rec.action
        if action == "PHASE":
            self._set(e, phase=rec.value)
            return
        if action == "REJOIN":
            self._set(e, active=True)
            return
        if action == "START":
            self._set(e, faulty=False, transient=False, active=True)
            return
        # node-level RESTART/TERMINATE/ISOLATE also cover every hosted task;
        # a rebooted node brings its tasks back in their configured state
        for target in [e, *self._hosted(e)]:
            if action == "RESTART":
                dormant = target != e and target.id in self.topology.spares
                self._set(target, restarted=True, faulty=False, transient=False, active=not dormant)
            elif action == "TERMINATE":
                self._set(target, active=False)
            elif action == "ISOLATE":
                self._set(target, isolated=True)
