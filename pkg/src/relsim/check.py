"""Assertions over trace files.

One assertion per line; ``#`` starts a comment::

    EVENT_OCCURS  <pattern>
    EVENT_ABSENT  <pattern>
    ORDERED_PAIR  <pattern> ; <pattern> [; <pattern> ...]
    WITHIN_MS     <bound-ms> <pattern> ; <pattern>

A pattern is a list of ``key=value`` matchers over the trace fields ``kind``,
``node`` and ``component`` and the ``key=value`` items of the detail column.
The special keys ``after`` and ``before`` bound the event time
(``after <= time < before``).
"""

from __future__ import annotations

from dataclasses import dataclass

from relsim.sim.trace import TraceLine

KINDS = ("EVENT_OCCURS", "EVENT_ABSENT", "ORDERED_PAIR", "WITHIN_MS")


class AssertionSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Pattern:
    fields: tuple[tuple[str, str], ...]
    after: float | None = None
    before: float | None = None

    def matches(self, line: TraceLine) -> bool:
        if self.after is not None and line.time < self.after:
            return False
        if self.before is not None and line.time >= self.before:
            return False
        f = line.fields()
        return all(f.get(k) == v for k, v in self.fields)

    def __str__(self) -> str:
        parts = [f"{k}={v}" for k, v in self.fields]
        if self.after is not None:
            parts.append(f"after={self.after:g}")
        if self.before is not None:
            parts.append(f"before={self.before:g}")
        return " ".join(parts)


@dataclass(frozen=True)
class TraceAssertion:
    kind: str
    patterns: tuple[Pattern, ...]
    bound: float | None = None
    source_line: int = 0

    def __str__(self) -> str:
        b = f" {self.bound:g}" if self.bound is not None else ""
        return f"{self.kind}{b} " + " ; ".join(map(str, self.patterns))


@dataclass(frozen=True)
class Outcome:
    assertion: TraceAssertion
    passed: bool
    message: str = ""


def _pattern(text: str, lineno: int) -> Pattern:
    fields, after, before = [], None, None
    for item in text.split():
        k, sep, v = item.partition("=")
        if not sep or not k or not v:
            raise AssertionSyntaxError(f"line {lineno}: bad matcher {item!r}")
        if k in ("after", "before"):
            try:
                value = float(v)
            except ValueError:
                raise AssertionSyntaxError(f"line {lineno}: {k} needs a number") from None
            after, before = (value, before) if k == "after" else (after, value)
        else:
            fields.append((k, v))
    if not fields and after is None and before is None:
        raise AssertionSyntaxError(f"line {lineno}: empty pattern")
    return Pattern(tuple(fields), after, before)


def parse_assertions(text: str) -> list[TraceAssertion]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, _, rest = line.partition(" ")
        if kind not in KINDS:
            raise AssertionSyntaxError(f"line {lineno}: unknown assertion kind {kind!r}")
        bound = None
        if kind == "WITHIN_MS":
            first, _, rest = rest.strip().partition(" ")
            try:
                bound = float(first)
            except ValueError:
                raise AssertionSyntaxError(f"line {lineno}: WITHIN_MS needs a numeric bound") from None
        pats = tuple(_pattern(p, lineno) for p in rest.split(";"))
        want = {"EVENT_OCCURS": 1, "EVENT_ABSENT": 1, "WITHIN_MS": 2}.get(kind)
        if (want is not None and len(pats) != want) or (kind == "ORDERED_PAIR" and len(pats) < 2):
            raise AssertionSyntaxError(f"line {lineno}: wrong number of patterns for {kind}")
        out.append(TraceAssertion(kind, pats, bound, lineno))
    return out


def _loc(i: int, line: TraceLine) -> str:
    return f"trace line {i + 1}: {line.format()}"


def evaluate(a: TraceAssertion, lines: list[TraceLine]) -> Outcome:
    if a.kind == "EVENT_OCCURS":
        if any(a.patterns[0].matches(line) for line in lines):
            return Outcome(a, True)
        return Outcome(a, False, "no matching event")
    if a.kind == "EVENT_ABSENT":
        for i, line in enumerate(lines):
            if a.patterns[0].matches(line):
                return Outcome(a, False, _loc(i, line))
        return Outcome(a, True)
    if a.kind == "ORDERED_PAIR":
        i, last = 0, None
        for k, pat in enumerate(a.patterns):
            while i < len(lines) and not pat.matches(lines[i]):
                i += 1
            if i == len(lines):
                where = f"; after {_loc(last, lines[last])}" if last is not None else ""
                return Outcome(a, False, f"pattern {k + 1} ({pat}) never matched{where}")
            last = i
            i += 1
        return Outcome(a, True)
    # WITHIN_MS
    first, second = a.patterns
    for i, line in enumerate(lines):
        if not first.matches(line):
            continue
        ok = any(second.matches(m) and m.time - line.time <= a.bound for m in lines[i:])
        if not ok:
            return Outcome(a, False, _loc(i, line))
    return Outcome(a, True)


def check(lines: list[TraceLine], assertions: list[TraceAssertion]) -> list[Outcome]:
    return [evaluate(a, lines) for a in assertions]
