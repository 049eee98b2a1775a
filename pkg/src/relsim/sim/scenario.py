"""Line-oriented scenario files.

Sections (a header may carry its content on the same line)::

    [NODES] 3
    [TASKS]      10 ON 1          (append SPARE for a dormant spare)
    [GROUPS]     3: 10 11 12
    [NET]        d_min=1 d_max=10 p_omit=0 p_late=0 late_factor=5 rho=0.001
    [ALPHA]      K=0.9 T=3 period=1500
    [BB]         hb=40 suspect=90 ae=200 reboot=100 vote=200 task_hb=100
    [FAULTS]     1000 CRASH_TASK T10 | HANG_TASK T10 400 | RAISE_EXCEPTION T10 0
                 | CRASH_NODE N2 | CORRUPT_BALLOT T11 99
    [PARTITION]  2000 4000 0 1 | 2 3
    [SCRIPT]     recovery.ariel   (or a compiled .rcod with a sibling .cfg)
    [CONSTANTS]  definitions.h
    [RUN]        until=50000      (default horizon for ``relsim run``)

``#`` starts a comment. Paths are resolved against the scenario's directory.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from relsim.entities import EntityKind, EntityRef
from relsim.topology import Topology


class ScenarioError(Exception):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


FAULT_KINDS = {
    "CRASH_TASK": (EntityKind.TASK, False),
    "CRASH_NODE": (EntityKind.NODE, False),
    "HANG_TASK": (EntityKind.TASK, True),
    "RAISE_EXCEPTION": (EntityKind.TASK, True),
    "CORRUPT_BALLOT": (EntityKind.TASK, True),
}


@dataclass(frozen=True)
class FaultSpec:
    at: float
    kind: str
    target: EntityRef
    arg: int | None = None

    def __post_init__(self) -> None:
        if self.at < 0:
            raise ValueError("fault time must be non-negative")
        if self.kind not in FAULT_KINDS:
            raise ValueError(f"unknown fault kind {self.kind}")
        want, needs_arg = FAULT_KINDS[self.kind]
        if self.target.kind is not want:
            raise ValueError(f"{self.kind} needs a {want.name} target, got {self.target}")
        if needs_arg and self.arg is None:
            raise ValueError(f"{self.kind} needs an argument")


NET_KEYS = {"d_min", "d_max", "p_omit", "p_late", "late_factor", "rho"}
ALPHA_KEYS = {"K", "T", "period"}
SECTIONS = {"NODES", "TASKS", "GROUPS", "NET", "ALPHA", "BB", "FAULTS", "PARTITION",
            "SCRIPT", "CONSTANTS", "RUN"}
RUN_KEYS = {"until"}
DEFAULT_UNTIL = 10_000.0
BB_KEYS = {"hb", "suspect", "ae", "reboot", "vote", "task_hb", "tick"}


@dataclass
class Scenario:
    nodes: int = 1
    tasks: dict[int, int] = field(default_factory=dict)
    spares: set[int] = field(default_factory=set)
    groups: dict[int, tuple[int, ...]] = field(default_factory=dict)
    net: dict[str, float] = field(default_factory=dict)
    drift: dict[int, float] = field(default_factory=dict)
    alpha: dict[str, float] = field(default_factory=dict)
    bb: dict[str, float] = field(default_factory=dict)
    faults: list[FaultSpec] = field(default_factory=list)
    partitions: list[tuple[float, float, tuple[tuple[int, ...], ...]]] = field(default_factory=list)
    script: Path | None = None
    constants: Path | None = None
    base_dir: Path = Path(".")
    run: dict[str, float] = field(default_factory=dict)

    @property
    def until(self) -> float:
        return self.run.get("until", DEFAULT_UNTIL)

    def topology(self) -> Topology:
        return Topology(list(range(self.nodes)), dict(self.tasks), dict(self.groups), set(self.spares))

    def validate(self) -> None:
        topo = self.topology()
        for f in self.faults:
            if not topo.knows(f.target):
                raise ScenarioError(f"UnknownTarget: fault {f.kind} targets {f.target}")
        for g, members in self.groups.items():
            for m in members:
                if m not in self.tasks:
                    raise ScenarioError(f"group {g} lists unknown task {m}")
        for start, end, blocks in self.partitions:
            covered = sorted(n for b in blocks for n in b)
            if covered != list(range(self.nodes)):
                raise ScenarioError(f"partition {start}-{end} blocks must cover nodes 0..{self.nodes - 1} exactly")


_HEADER = re.compile(r"\[(\w+)\]\s*(.*)$")


def _number(text: str, lineno: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ScenarioError(f"not a number: {text!r}", lineno) from None


def _integer(text: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ScenarioError(f"not an integer: {text!r}", lineno) from None


def _keyvals(text: str, allowed: set[str], lineno: int, into: dict, drift: dict | None = None) -> None:
    for item in text.split():
        key, sep, val = item.partition("=")
        if not sep:
            raise ScenarioError(f"expected key=value, got {item!r}", lineno)
        if drift is not None and key.startswith("drift."):
            drift[_integer(key[6:], lineno)] = _number(val, lineno)
        elif key in allowed:
            into[key] = _number(val, lineno)
        else:
            raise ScenarioError(f"unknown key {key!r}", lineno)


def parse_scenario(text: str, base_dir: Path | str = ".") -> Scenario:
    sc = Scenario(base_dir=Path(base_dir))
    section = None
    seen_nodes = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            section = m.group(1).upper()
            if section not in SECTIONS:
                raise ScenarioError(f"unknown section [{section}]", lineno)
            line = m.group(2).strip()
            if not line:
                continue
        if section is None:
            raise ScenarioError("content before the first [SECTION]", lineno)
        fields = line.split()
        if section == "NODES":
            sc.nodes = _integer(line, lineno)
            if sc.nodes < 1:
                raise ScenarioError("need at least one node", lineno)
            seen_nodes = True
        elif section == "TASKS":
            if len(fields) not in (3, 4) or fields[1] != "ON" or (len(fields) == 4 and fields[3] != "SPARE"):
                raise ScenarioError("expected '<task-id> ON <node-id> [SPARE]'", lineno)
            tid = _integer(fields[0], lineno)
            if tid in sc.tasks:
                raise ScenarioError(f"task {tid} declared twice", lineno)
            sc.tasks[tid] = _integer(fields[2], lineno)
            if len(fields) == 4:
                sc.spares.add(tid)
        elif section == "GROUPS":
            head, sep, rest = line.partition(":")
            if not sep:
                raise ScenarioError("expected '<group-id>: <task-id>...'", lineno)
            sc.groups[_integer(head.strip(), lineno)] = tuple(_integer(x, lineno) for x in rest.split())
        elif section == "NET":
            _keyvals(line, NET_KEYS, lineno, sc.net, sc.drift)
        elif section == "ALPHA":
            _keyvals(line, ALPHA_KEYS, lineno, sc.alpha)
        elif section == "BB":
            _keyvals(line, BB_KEYS, lineno, sc.bb)
        elif section == "RUN":
            _keyvals(line, RUN_KEYS, lineno, sc.run)
        elif section == "FAULTS":
            if len(fields) < 3:
                raise ScenarioError("expected '<at-ms> <kind> <target> [args]'", lineno)
            try:
                target = EntityRef.parse(fields[2])
                arg = _integer(fields[3], lineno) if len(fields) > 3 else None
                sc.faults.append(FaultSpec(_number(fields[0], lineno), fields[1], target, arg))
            except ValueError as exc:
                raise ScenarioError(str(exc), lineno) from None
        elif section == "PARTITION":
            if len(fields) < 3:
                raise ScenarioError("expected '<start> <end> <block>|<block>'", lineno)
            start, end = _number(fields[0], lineno), _number(fields[1], lineno)
            if end <= start:
                raise ScenarioError("partition end must follow start", lineno)
            blocks = tuple(tuple(_integer(x, lineno) for x in b.split())
                           for b in " ".join(fields[2:]).split("|"))
            if any(not b for b in blocks):
                raise ScenarioError("empty partition block", lineno)
            sc.partitions.append((start, end, blocks))
        elif section == "SCRIPT":
            sc.script = sc.base_dir / line
        elif section == "CONSTANTS":
            sc.constants = sc.base_dir / line
        else:
            raise ScenarioError(f"unknown section [{section}]", lineno)
    if not seen_nodes:
        raise ScenarioError("missing [NODES] section")
    for t, n in sc.tasks.items():
        if not 0 <= n < sc.nodes:
            raise ScenarioError(f"task {t} placed on unknown node {n}")
    sc.validate()
    return sc


def load_scenario(path: Path | str) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), path.parent)
