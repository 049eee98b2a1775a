"""One backbone (BB) component per node.

The component stores notifications and command effects in its replica of
the database, gossips deltas to its peers, watches peer liveness through
TOM heartbeat time-outs, and, on the executor node, runs RINT after each
newly stored notification and dispatches the resulting commands.

``rt`` is the node runtime supplied by the world. It must provide ``node``,
``tom``, ``send(dst, kind, payload, src_task=, dst_task=)``,
``trace(component, kind, detail)``, ``next_counter()``,
``apply_effect(verb, entity)`` and ``deliver_to_task(task_id, kind, payload)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from relsim.ariel.rcode import RCodeProgram
from relsim.backbone.alpha import AlphaParams
from relsim.backbone.db import DbDelta, Effect, ErrorNotification, Handled, NotificationDB, Seq
from relsim.backbone.tom import Timeout
from relsim.entities import EntityKind, EntityRef, ErrorClass, Verb, node as node_ref
from relsim.topology import Topology
from relsim.vm import RecoveryCommand, run

BB_DETECTOR = 0  # detector id used for crash notifications raised by the BB itself


def elect_executor(alive: Iterable[int]) -> int:
    alive = list(alive)
    if not alive:
        raise ValueError("no alive nodes")
    return min(alive)


def anti_entropy_exchange(db: NotificationDB, peer_digest) -> list[DbDelta]:
    """Deltas held locally whose seq the peer's digest lacks."""
    return db.missing(peer_digest)


@dataclass(frozen=True)
class BBParams:
    hb_period: float = 40.0
    suspect_after: float = 90.0
    ae_period: float = 200.0


class Backbone:
    def __init__(self, rt, topology: Topology, program: RCodeProgram,
                 alpha: AlphaParams | None = None, params: BBParams | None = None):
        self.rt = rt
        self.node = rt.node
        self.topology = topology
        self.program = program
        self.params = params or BBParams()
        self.db = NotificationDB(topology, alpha)
        self.view: set[int] = set(topology.nodes)
        self.lamport = 0
        self.rint_runs = 0
        self._suspect_timeouts: dict[int, int] = {}

    # -- lifecycle -----------------------------------------------------------
    @property
    def peers(self) -> list[int]:
        return [n for n in self.topology.nodes if n != self.node]

    @property
    def executor(self) -> int:
        return elect_executor(self.view)

    @property
    def is_executor(self) -> bool:
        return self.executor == self.node

    def start(self) -> None:
        tom, p = self.rt.tom, self.params
        now = tom.now()
        self._heartbeat(None)
        tom.schedule(now + p.hb_period, self._heartbeat, tag=1000, period=p.hb_period)
        tom.schedule(now + p.ae_period, self._anti_entropy, tag=1001, period=p.ae_period)
        for peer in self.peers:
            self._arm_suspicion(peer)
            # a (re)booted replica asks for everything it missed right away
            self.rt.send(peer, "DIGEST", self.db.seqs())

    # -- notifications ---------------------------------------------------------
    def notify(self, detector: int, entity: EntityRef, error_class: ErrorClass) -> ErrorNotification:
        """Entry point for local detection tools: build and record a notification."""
        n = ErrorNotification(Seq(self.node, self.rt.next_counter()), detector, entity,
                              error_class, self.rt.tom.now())
        self.record_notification(n)
        return n

    def record_notification(self, n: ErrorNotification) -> DbDelta | None:
        if n.seq in self.db:
            return None
        delta = self._publish(n)
        self.rt.trace("BB", "NOTIFY", f"seq={n.seq} class={n.error_class.value} entity={n.entity} "
                      f"detector={n.detector} local={n.local_time:.3f} "
                      f"alpha={self.db.alpha(n.entity).count.score:.6f}")
        self._after_store([n])
        return delta

    def apply_remote_delta(self, d: DbDelta, *, evaluate: bool = True) -> bool:
        if d.seq in self.db:
            return False
        self.lamport = max(self.lamport, d.lamport)
        self.db.merge(d)
        n = d.notification
        if n is not None:
            self.rt.trace("BB", "STORE", f"seq={n.seq} class={n.error_class.value} entity={n.entity}")
            if evaluate:
                self._after_store([n])
        return True

    def declare_phase(self, task_id: int, phase: int) -> None:
        self._publish(Effect(Seq(self.node, self.rt.next_counter()), "PHASE",
                             EntityRef(EntityKind.TASK, task_id), self.rt.tom.now(), value=phase))

    def _publish(self, record) -> DbDelta:
        self.lamport += 1
        delta = DbDelta(record, self.lamport)
        self.db.merge(delta)
        for peer in self.peers:
            self.rt.send(peer, "NOTIFY", delta)
        return delta

    # -- recovery ----------------------------------------------------------------
    def _after_store(self, fresh: list[ErrorNotification]) -> None:
        if not self.is_executor:
            return
        for n in fresh:
            if n.seq not in self.db.handled:
                self._run_rint(n)

    def _run_rint(self, n: ErrorNotification) -> list[RecoveryCommand]:
        commands = run(self.program, self.db.snapshot(), origin_node=self.node)
        self.rint_runs += 1
        self.rt.trace("BB", "RINT_RUN", f"trigger={n.seq} commands={len(commands)}")
        self._publish(Handled(Seq(self.node, self.rt.next_counter()), n.seq, self.node,
                              len(commands), self.rt.tom.now()))
        for c in commands:
            self.dispatch_command(c, n.seq)
        return commands

    def dispatch_command(self, c: RecoveryCommand, trigger: Seq) -> None:
        pay = f" payload={c.payload}" if c.payload is not None else ""
        self.rt.trace("BB", "CMD", f"verb={c.verb.value} target={c.target}{pay} trigger={trigger}")
        if not self.topology.knows(c.target):
            self.rt.trace("BB", "CMD_DROP", f"verb={c.verb.value} target={c.target} "
                          f"trigger={trigger} reason=TargetUnknown")
            return
        for target in self.topology.expand(c.target):
            home = self.topology.home(target)
            if c.verb in (Verb.SEND, Verb.WARN):
                msg = (c.verb.value, c.payload, str(trigger))
                if home == self.node:
                    self.rt.deliver_to_task(target.id, "MSG", msg)
                else:
                    self.rt.send(home, "MSG", msg, dst_task=target.id)
            elif home == self.node or target.kind is EntityKind.NODE:
                # node-level commands act on the machine itself (reset line, power,
                # network port), so the executor applies them directly
                self._execute(c.verb, target, trigger)
            else:
                self.rt.send(home, "CMD", (c.verb, target, trigger))

    def _execute(self, verb: Verb, target: EntityRef, trigger: Seq) -> None:
        self.rt.trace("BB", "EXEC", f"verb={verb.value} target={target} trigger={trigger}")
        self._publish(Effect(Seq(self.node, self.rt.next_counter()), verb.value, target,
                             self.rt.tom.now(), cause=trigger))
        self.rt.apply_effect(verb, target)

    # -- peer liveness -----------------------------------------------------------
    def _heartbeat(self, _t: Timeout | None) -> None:
        for peer in self.peers:
            self.rt.send(peer, "BB_HEARTBEAT", self.node)

    def _arm_suspicion(self, peer: int) -> None:
        tom = self.rt.tom
        deadline = tom.now() + self.params.suspect_after
        tid = self._suspect_timeouts.get(peer)
        if tid is not None and tid in tom:
            tom.renew(tid, deadline)
        else:
            t = tom.schedule(deadline, lambda _t, p=peer: self._suspect(p), tag=2000 + peer)
            self._suspect_timeouts[peer] = t.id

    def _suspect(self, peer: int) -> None:
        was_executor = self.is_executor
        self.view.discard(peer)
        self._suspect_timeouts.pop(peer, None)
        self.rt.trace("BB", "SUSPECT", f"peer={peer} view={_fmt_view(self.view)}")
        if self.is_executor:
            if not was_executor:
                self.rt.trace("BB", "TAKEOVER", f"view={_fmt_view(self.view)}")
                for n in self.db.unhandled():
                    self._run_rint(n)
            self._report_suspects()

    def _report_suspects(self) -> None:
        for peer in self.peers:
            if peer not in self.view and self.db.state(node_ref(peer)).active:
                self.notify(BB_DETECTOR, node_ref(peer), ErrorClass.CRASH)

    def _on_peer_heartbeat(self, peer: int) -> None:
        if peer not in self.view:
            self.view.add(peer)
            self.rt.trace("BB", "REJOIN", f"peer={peer} view={_fmt_view(self.view)}")
            self._publish(Effect(Seq(self.node, self.rt.next_counter()), "REJOIN",
                                 node_ref(peer), self.rt.tom.now()))
            self.rt.send(peer, "DIGEST", self.db.seqs())
        self._arm_suspicion(peer)

    # -- anti-entropy ----------------------------------------------------------------
    def _anti_entropy(self, _t: Timeout) -> None:
        self.rt.trace("BB", "DB_DIGEST", f"fp={self.db.fingerprint()} records={len(self.db)}")
        digest = self.db.seqs()
        for peer in sorted(self.view - {self.node}):
            self.rt.send(peer, "DIGEST", digest)

    def anti_entropy_exchange(self, peer_digest) -> list[DbDelta]:
        return anti_entropy_exchange(self.db, peer_digest)

    # -- wire ------------------------------------------------------------------------
    def on_message(self, kind: str, src: int, payload) -> None:
        if kind == "BB_HEARTBEAT":
            self._on_peer_heartbeat(src)
        elif kind == "NOTIFY":
            self.apply_remote_delta(payload)
        elif kind == "DIGEST":
            missing = self.anti_entropy_exchange(payload)
            if missing:
                self.rt.send(src, "DELTAS", tuple(missing))
        elif kind == "DELTAS":
            fresh = []
            for d in payload:
                if self.apply_remote_delta(d, evaluate=False) and d.notification is not None:
                    fresh.append(d.notification)
            self.rt.trace("BB", "DELTAS", f"from={src} received={len(payload)} new_notifications={len(fresh)}")
            self._after_store(fresh)
        elif kind == "CMD":
            verb, target, trigger = payload
            self._execute(verb, target, trigger)
        else:
            raise ValueError(f"backbone got unexpected message kind {kind!r}")


def _fmt_view(view: set[int]) -> str:
    return ",".join(str(n) for n in sorted(view))
