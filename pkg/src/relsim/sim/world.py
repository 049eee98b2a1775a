"""The simulated distributed system: nodes, tasks, tools and backbone replicas."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from relsim.ariel.ast import BTConfig, ReplicatedGroupConfig, WatchdogConfig
from relsim.ariel.rcode import RCodeProgram
from relsim.backbone.alpha import AlphaParams
from relsim.backbone.component import Backbone, BBParams
from relsim.backbone.tom import TimeoutManager
from relsim.entities import EntityKind, EntityRef, Verb, task as task_ref
from relsim.sim.clock import ClockModel
from relsim.sim.kernel import Kernel
from relsim.sim.net import Datagram, NetModel, Network, PartitionSchedule
from relsim.sim.scenario import FaultSpec, Scenario, ScenarioError
from relsim.sim.trace import Tracer
from relsim.tools import VoteRound, Watchdog, minority_reports, report_exception, vote

WORLD = -1  # pseudo node id for world-level events; sorts before every node

BB_KINDS = frozenset({"BB_HEARTBEAT", "NOTIFY", "DIGEST", "DELTAS", "CMD"})
UNTRACED_DROPS = frozenset({"BB_HEARTBEAT", "DIGEST"})


def ballot_value(round_no: int) -> int:
    """The value every correct replica computes for a round."""
    return (round_no * 7919) % 1000


@dataclass(frozen=True)
class WorldParams:
    net: NetModel
    rho: float
    bb: BBParams
    alpha: AlphaParams
    reboot_delay: float = 100.0
    vote_period: float = 200.0
    task_hb: float | None = None
    tick: float = 1.0

    @classmethod
    def from_scenario(cls, sc: Scenario, configs: list[BTConfig], seed: int) -> "WorldParams":
        net = NetModel(
            d_min=sc.net.get("d_min", 1.0), d_max=sc.net.get("d_max", 10.0),
            p_omit=sc.net.get("p_omit", 0.0), p_late=sc.net.get("p_late", 0.0),
            late_factor=sc.net.get("late_factor", 5.0), seed=seed,
        )
        hb = sc.bb.get("hb", 4 * net.d_max)
        bb = BBParams(hb_period=hb, suspect_after=sc.bb.get("suspect", 2 * hb + net.d_max),
                      ae_period=sc.bb.get("ae", 20 * net.d_max))
        periods = [c.period_ms for c in configs if isinstance(c, WatchdogConfig)]
        alpha = AlphaParams(K=sc.alpha.get("K", 0.9), T=sc.alpha.get("T", 3.0),
                            period=sc.alpha.get("period", 10 * min(periods) if periods else 1500.0))
        return cls(net, sc.net.get("rho", 1e-3), bb, alpha,
                   reboot_delay=sc.bb.get("reboot", 100.0), vote_period=sc.bb.get("vote", 200.0),
                   task_hb=sc.bb.get("task_hb"), tick=sc.bb.get("tick", 1.0))


class NodeRuntime:
    """Everything hosted on one node, plus the services the backbone calls back into."""

    def __init__(self, world: "World", node_id: int):
        self.world = world
        self.node = node_id
        self.alive = False
        self.incarnation = 0
        self.tom: TimeoutManager | None = None
        self.bb: Backbone | None = None
        self.watchdogs: dict[int, Watchdog] = {}
        self.voters: dict[int, "Voter"] = {}

    def boot(self) -> None:
        w = self.world
        self.alive = True
        self.incarnation += 1
        self.tom = TimeoutManager(w.kernel, w.clock, self.node, w.params.tick)
        self.bb = Backbone(self, w.topology, w.program, w.params.alpha, w.params.bb)
        self.watchdogs = {}
        for cfg in w.watchdog_configs:
            if w.topology.hosts[cfg.watched.id] == self.node:
                self.watchdogs[cfg.wid] = Watchdog(cfg, self.tom, self._watchdog_expired)
        self.voters = {}
        for cfg in w.group_configs:
            if w.voter_node(cfg) == self.node:
                self.voters[cfg.group.id] = Voter(self, cfg, w.params.vote_period)
        self.bb.start()
        for v in self.voters.values():
            v.start()

    def halt(self) -> None:
        self.alive = False
        if self.tom is not None:
            self.tom.stop()

    # -- services used by the backbone and tools -------------------------------
    def send(self, dst: int, kind: str, payload=None, *, src_task=None, dst_task=None) -> None:
        if self.alive:
            self.world.transmit(Datagram(kind, self.node, dst, payload, src_task, dst_task))

    def trace(self, component: str, kind: str, detail: str = "") -> None:
        self.world.trace(self.node, component, kind, detail)

    def next_counter(self) -> int:
        return self.world.next_counter(self.node)

    def apply_effect(self, verb: Verb, entity: EntityRef) -> None:
        self.world.apply_effect(self, verb, entity)

    def deliver_to_task(self, task_id: int, kind: str, payload) -> None:
        self.world.deliver_to_task(task_id, kind, payload, via_network=False)

    # -- tools ------------------------------------------------------------------
    def _watchdog_expired(self, wd: Watchdog) -> None:
        alarm, report = wd.expiry_outputs()
        self.trace(f"WD{alarm.wid}", "WD_FIRE", f"watched={alarm.watched} warn={alarm.warn_target} "
                   f"local={self.tom.now():.3f}")
        home = self.world.topology.hosts.get(alarm.warn_target.id)
        if home is not None:
            self.send(home, "ALARM", (alarm.wid, alarm.watched.id), dst_task=alarm.warn_target.id)
        self.bb.notify(report.detector, report.entity, report.error_class)


class Voter:
    """Majority voter of one replicated group: polls members, adjudicates at the deadline."""

    def __init__(self, rt: NodeRuntime, cfg: ReplicatedGroupConfig, period: float):
        self.rt = rt
        self.cfg = cfg
        self.period = period
        self.round_no = 0
        self.current: VoteRound | None = None

    def start(self) -> None:
        tom = self.rt.tom
        tom.schedule(tom.now() + self.period, self._open, tag=4000 + self.cfg.group.id, period=self.period)

    def _open(self, _t) -> None:
        self.round_no += 1
        db = self.rt.bb.db
        expected = tuple(m.id for m in self.cfg.members if not db.state(m).isolated)
        now = self.rt.tom.now()
        self.current = VoteRound(self.cfg.group, self.round_no, expected, deadline=now + self.period / 2)
        for m in expected:
            self.rt.send(self.rt.world.topology.hosts[m], "POLL",
                         (self.cfg.group.id, self.round_no, self.rt.node), dst_task=m)
        self.rt.tom.schedule(self.current.deadline, self._close, tag=4500 + self.cfg.group.id)

    def on_ballot(self, round_no: int, member: int, value: int) -> None:
        if self.current is not None and round_no == self.current.round:
            self.current.submit(member, value)

    def _close(self, _t) -> None:
        rnd = self.current
        winner, minority = vote(rnd)
        self.rt.trace(f"VOTER{self.cfg.group.id}", "VOTE",
                      f"round={rnd.round} winner={'none' if winner is None else winner} "
                      f"minority={','.join(f'T{m}' for m in sorted(minority)) or '-'}")
        for rep in minority_reports(rnd, minority):
            self.rt.bb.notify(rep.detector, rep.entity, rep.error_class)


class TaskProc:
    """Application task: heartbeats its watchdogs, answers polls, raises faults on cue."""

    def __init__(self, world: "World", tid: int, node_id: int, spare: bool):
        self.world = world
        self.id = tid
        self.node = node_id
        self.spare = spare
        self.state = "dormant" if spare else "down"
        self.gen = 0
        self.corrupt_next: int | None = None
        self._timers: list[int] = []
        self.watches = [(c.wid, c.period_ms) for c in world.watchdog_configs if c.watched.id == tid]

    @property
    def rt(self) -> NodeRuntime:
        return self.world.nodes[self.node]

    def trace(self, kind: str, detail: str = "") -> None:
        self.rt.trace(f"T{self.id}", kind, detail)

    def _disarm(self) -> None:
        tom = self.rt.tom
        for tid in self._timers:
            if tom is not None and tid in tom:
                tom.cancel(tid)
        self._timers = []

    def begin(self) -> None:
        self._disarm()
        self.gen += 1
        self.state = "running"
        tom = self.rt.tom
        for wid, period in self.watches:
            interval = self.world.params.task_hb or period * 2.0 / 3.0
            self._heartbeat(wid)
            t = tom.schedule(tom.now() + interval, lambda _t, w=wid: self._heartbeat(w),
                             tag=3000 + self.id, period=interval)
            self._timers.append(t.id)

    def _heartbeat(self, wid: int) -> None:
        if self.state != "running" or not self.rt.alive:
            return
        self.trace("HB", f"wd={wid} local={self.rt.tom.now():.3f}")
        self.rt.send(self.node, "HB", (wid, self.id), src_task=self.id)

    def crash(self) -> None:
        self._disarm()
        self.state = "crashed"

    def hang(self, duration: float) -> None:
        if self.state != "running":
            return
        self._disarm()
        self.state = "hung"
        gen = self.gen
        self.world.kernel.call_at(self.world.kernel.now + duration, self.node, lambda: self._resume(gen))

    def _resume(self, gen: int) -> None:
        if self.state == "hung" and self.gen == gen and self.rt.alive:
            self.trace("RESUME")
            self.begin()

    def restart(self) -> None:
        self.trace("RESTARTED")
        self.begin()

    def start(self) -> None:
        if self.state in ("dormant", "terminated", "down"):
            self.trace("STARTED")
            self.begin()

    def terminate(self) -> None:
        self._disarm()
        self.state = "terminated"
        self.trace("TERMINATED")

    def raise_exception(self, code: int) -> None:
        if self.state != "running":
            return
        self.trace("EXCEPTION", f"code={code}")
        self.rt.send(self.node, "EXC", (self.id, code), src_task=self.id)

    def on_poll(self, group_id: int, round_no: int, voter_node: int) -> None:
        if self.state != "running":
            return
        value = ballot_value(round_no)
        if self.corrupt_next is not None:
            value, self.corrupt_next = self.corrupt_next, None
        self.rt.send(voter_node, "BALLOT", (group_id, round_no, value), src_task=self.id)


class World:
    def __init__(self, scenario: Scenario, program: RCodeProgram, configs: list[BTConfig],
                 seed: int = 0, trace_path: Path | str | None = None):
        self.scenario = scenario
        self.program = program
        self.seed = seed
        self.topology = scenario.topology()
        self.watchdog_configs = sorted((c for c in configs if isinstance(c, WatchdogConfig)), key=lambda c: c.wid)
        self.group_configs = [c for c in configs if isinstance(c, ReplicatedGroupConfig)]
        self._check_configs()
        self.params = WorldParams.from_scenario(scenario, configs, seed)
        self.kernel = Kernel()
        self.clock = ClockModel.seeded(self.topology.nodes, self.params.rho, seed, scenario.drift)
        partitions = PartitionSchedule()
        for start, end, blocks in scenario.partitions:
            partitions.add(start, end, blocks, self.topology.nodes)
        self.net = Network(self.params.net, partitions)
        self.tracer = Tracer(trace_path)
        self._counters = {n: 0 for n in self.topology.nodes}
        self.nodes = {n: NodeRuntime(self, n) for n in self.topology.nodes}
        self.tasks = {t: TaskProc(self, t, n, t in self.topology.spares)
                      for t, n in sorted(self.topology.hosts.items())}
        self.started = False
        self.sent_kinds: Counter[str] = Counter()

    def _check_configs(self) -> None:
        hosts = self.topology.hosts
        seen = set()
        for c in self.watchdog_configs:
            if c.wid in seen:
                raise ScenarioError(f"watchdog {c.wid} configured twice")
            seen.add(c.wid)
            for t in (c.watched, c.warn_target):
                if t.id not in hosts:
                    raise ScenarioError(f"watchdog {c.wid} references unknown task {t}")
        for c in self.group_configs:
            for m in c.members:
                if m.id not in hosts:
                    raise ScenarioError(f"replicated group {c.group.id} references unknown task {m}")

    def voter_node(self, cfg: ReplicatedGroupConfig) -> int:
        return self.topology.hosts[min(m.id for m in cfg.members)]

    # -- plumbing ---------------------------------------------------------------
    def trace(self, node, component: str, kind: str, detail: str = "") -> None:
        self.tracer.emit(self.kernel.now, None if node == WORLD else node, component, kind, detail)

    def next_counter(self, node_id: int) -> int:
        self._counters[node_id] += 1
        return self._counters[node_id]

    def transmit(self, dg: Datagram) -> None:
        self.sent_kinds[dg.kind] += 1
        decision = self.net.send_datagram(dg, self.kernel.now)
        if not decision.delivered:
            if dg.kind not in UNTRACED_DROPS:
                self.trace(dg.src, "NET", "DROP", f"msg={dg.kind} src={dg.src} dst={dg.dst} reason={decision.reason}")
            return
        self.kernel.call_at(decision.at, dg.dst, lambda: self._deliver(dg))

    def _deliver(self, dg: Datagram) -> None:
        rt = self.nodes[dg.dst]
        if not rt.alive:
            return
        if self.net.isolated(dg):
            self.trace(dg.dst, "NET", "DROP", f"msg={dg.kind} src={dg.src} dst={dg.dst} reason=isolated")
            return
        kind = dg.kind
        if kind in BB_KINDS:
            rt.bb.on_message(kind, dg.src, dg.payload)
        elif kind == "HB":
            wid, sender = dg.payload
            wd = rt.watchdogs.get(wid)
            if wd is not None:
                was_enabled = wd.enabled
                if wd.on_heartbeat(sender) and not was_enabled:
                    rt.trace(f"WD{wid}", "WD_ENABLE", f"watched=T{sender} deadline={wd.deadline:.3f}")
        elif kind == "EXC":
            tid, code = dg.payload
            rep = report_exception(tid, code)
            rt.bb.notify(rep.detector, rep.entity, rep.error_class)
        elif kind == "BALLOT":
            gid, round_no, value = dg.payload
            voter = rt.voters.get(gid)
            if voter is not None:
                voter.on_ballot(round_no, dg.src_task, value)
        elif kind in ("MSG", "ALARM", "POLL"):
            self.deliver_to_task(dg.dst_task, kind, dg.payload, via_network=True)
        else:
            raise ValueError(f"unroutable datagram kind {kind!r}")

    def deliver_to_task(self, task_id: int, kind: str, payload, via_network: bool) -> None:
        proc = self.tasks.get(task_id)
        if proc is None or not self.nodes[proc.node].alive:
            return
        if not via_network and task_id in self.net.isolated_tasks:
            self.trace(proc.node, "NET", "DROP", f"msg={kind} dst_task=T{task_id} reason=isolated")
            return
        if kind == "POLL":
            proc.on_poll(*payload)
            return
        if kind == "MSG":
            verb, value, trigger = payload
            detail = f"msg={verb} payload={'-' if value is None else value} trigger={trigger}"
        else:
            wid, watched = payload
            detail = f"msg=ALARM wd={wid} watched=T{watched}"
        proc.trace("RECV", f"{detail} state={proc.state}")

    # -- recovery effects ----------------------------------------------------------
    def apply_effect(self, rt: NodeRuntime, verb: Verb, entity: EntityRef) -> None:
        if entity.kind is EntityKind.TASK:
            proc = self.tasks[entity.id]
            if verb is Verb.RESTART:
                proc.restart()
            elif verb is Verb.TERMINATE:
                proc.terminate()
            elif verb is Verb.START:
                proc.start()
            elif verb is Verb.ISOLATE:
                self.net.isolated_tasks.add(entity.id)
                proc.trace("ISOLATED")
        elif entity.kind is EntityKind.NODE:
            n = entity.id
            if verb is Verb.RESTART:
                self.kernel.call_at(self.kernel.now, n, lambda: self._reboot(n))
            elif verb is Verb.TERMINATE:
                self.kernel.call_at(self.kernel.now, n, lambda: self._shutdown(n))
            elif verb is Verb.ISOLATE:
                self.net.isolated_nodes.add(n)
                self.trace(n, "NODE", "ISOLATED")

    def _halt_node(self, n: int) -> None:
        self.nodes[n].halt()
        for proc in self.tasks.values():
            if proc.node == n and proc.state in ("running", "hung"):
                proc.state = "down"
                proc._timers = []

    def _reboot(self, n: int) -> None:
        # a crashed node is power-cycled the same way
        self.trace(n, "NODE", "REBOOT", f"delay={self.params.reboot_delay:g}")
        if self.nodes[n].alive:
            self._halt_node(n)
        self.kernel.call_at(self.kernel.now + self.params.reboot_delay, n, lambda: self._boot_after_reboot(n))

    def _boot_after_reboot(self, n: int) -> None:
        rt = self.nodes[n]
        rt.boot()
        self.trace(n, "NODE", "UP", f"incarnation={rt.incarnation}")
        for proc in self.tasks.values():
            if proc.node == n:
                proc._timers = []
                if proc.spare:
                    proc.state = "dormant"
                else:
                    proc.begin()

    def _shutdown(self, n: int) -> None:
        if self.nodes[n].alive:
            self.trace(n, "NODE", "SHUTDOWN")
            self._halt_node(n)

    # -- faults ---------------------------------------------------------------------
    def inject_fault(self, f: FaultSpec) -> None:
        home = self.topology.home(f.target)
        arg = f" arg={f.arg}" if f.arg is not None else ""
        if not self.nodes[home].alive:
            self.trace(home, "WORLD", "FAULT_SKIPPED", f"fault={f.kind} target={f.target}{arg} reason=node_down")
            return
        self.trace(home, "WORLD", "FAULT", f"fault={f.kind} target={f.target}{arg}")
        if f.kind == "CRASH_NODE":
            self._halt_node(f.target.id)
            return
        proc = self.tasks[f.target.id]
        if f.kind == "CRASH_TASK":
            proc.crash()
        elif f.kind == "HANG_TASK":
            proc.hang(f.arg)
        elif f.kind == "RAISE_EXCEPTION":
            proc.raise_exception(f.arg)
        elif f.kind == "CORRUPT_BALLOT":
            proc.corrupt_next = f.arg

    # -- driving --------------------------------------------------------------------
    def start(self) -> None:
        if self.started:
            return
        self.started = True
        self.trace(WORLD, "WORLD", "START", f"seed={self.seed} nodes={len(self.nodes)} "
                   f"program={len(self.program)} alpha_period={self.params.alpha.period:g}")
        for n in sorted(self.nodes):
            self.nodes[n].boot()
        for proc in self.tasks.values():
            if not proc.spare:
                proc.begin()
        for f in sorted(self.scenario.faults, key=lambda f: f.at):
            home = self.topology.home(f.target)
            self.kernel.call_at(f.at, home, lambda f=f: self.inject_fault(f))
        for w in self.net.partitions.windows:
            blocks = "|".join(",".join(map(str, sorted(b))) for b in w.blocks)
            self.kernel.call_at(w.start, WORLD, lambda b=blocks: self.trace(WORLD, "WORLD", "PARTITION", f"blocks={b}"))
            self.kernel.call_at(w.end, WORLD, lambda: self.trace(WORLD, "WORLD", "HEAL"))

    def run(self, until: float) -> Tracer:
        self.start()
        self.kernel.run(until)
        return self.tracer

    def alive_backbones(self) -> list[Backbone]:
        return [rt.bb for _, rt in sorted(self.nodes.items()) if rt.alive]
