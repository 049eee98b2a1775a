"""Basic detection tools: watchdog timer, exception reporter, majority voter.

Each tool hands its error reports to the local backbone component.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from relsim.ariel.ast import WatchdogConfig
from relsim.backbone.tom import Timeout, TimeoutManager
from relsim.entities import EntityRef, ErrorClass, task

# detector ids: watchdogs report under their own wid
DETECTOR_EXCEPTION = 901
DETECTOR_VOTER_BASE = 1000


@dataclass(frozen=True)
class Alarm:
    wid: int
    watched: EntityRef
    warn_target: EntityRef


@dataclass(frozen=True)
class Report:
    """What a tool asks the backbone to record."""

    detector: int
    entity: EntityRef
    error_class: ErrorClass


class Watchdog:
    """Single-shot watchdog, armed by the first heartbeat of the watched task."""

    def __init__(self, config: WatchdogConfig, tom: TimeoutManager,
                 on_expire: Callable[["Watchdog"], None] | None = None):
        self.config = config
        self.tom = tom
        self.on_expire = on_expire
        self.enabled = False
        self.timeout_id: int | None = None
        self.deadline: float | None = None

    def on_heartbeat(self, sender: int) -> bool:
        """Arm or renew on a heartbeat from the watched task; False if ignored."""
        if sender != self.config.watched.id:
            return False
        self.deadline = self.tom.now() + self.config.period_ms
        if not self.enabled:
            self.enabled = True
            self.timeout_id = self.tom.schedule(self.deadline, self._expire, tag=self.config.wid).id
        else:
            self.tom.renew(self.timeout_id, self.deadline)
        return True

    def _expire(self, _t: Timeout) -> None:
        self.enabled = False
        self.timeout_id = None
        if self.on_expire is not None:
            self.on_expire(self)

    def expiry_outputs(self) -> tuple[Alarm, Report]:
        c = self.config
        return (Alarm(c.wid, c.watched, c.warn_target),
                Report(c.wid, c.watched, ErrorClass.WD_TIMEOUT))


def report_exception(task_id: int, code: int) -> Report:
    # the code travels in the trace only; the database keeps the error class
    return Report(DETECTOR_EXCEPTION, task(task_id), ErrorClass.EXCEPTION)


@dataclass
class VoteRound:
    group: EntityRef
    round: int
    members: tuple[int, ...]
    ballots: dict[int, int] = field(default_factory=dict)
    deadline: float = 0.0

    def submit(self, member: int, value: int) -> bool:
        """Accept the first ballot of each member; later ones and strangers are ignored."""
        if member not in self.members or member in self.ballots:
            return False
        self.ballots[member] = value
        return True


def vote(rnd: VoteRound) -> tuple[int | None, frozenset[int]]:
    """Majority adjudication over the ballots submitted by the deadline.

    The winner is the value held by a strict majority of submitted ballots.
    The minority is every member that voted otherwise or did not vote; with
    no winner, every member is in it.
    """
    counts = Counter(rnd.ballots.values())
    submitted = len(rnd.ballots)
    winner = None
    if counts:
        value, n = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))
        if 2 * n > submitted:
            winner = value
    if winner is None:
        return None, frozenset(rnd.members)
    return winner, frozenset(m for m in rnd.members if rnd.ballots.get(m) != winner)


def minority_reports(rnd: VoteRound, minority: frozenset[int]) -> list[Report]:
    det = DETECTOR_VOTER_BASE + rnd.group.id
    return [Report(det, task(m), ErrorClass.MINORITY_VOTE) for m in sorted(minority)]
