"""Tab-separated trace log: global-ms, node, component, event-kind, detail."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class TraceLine:
    time: float
    node: str
    component: str
    kind: str
    detail: str

    def fields(self) -> dict[str, str]:
        out = {"kind": self.kind, "node": self.node, "component": self.component}
        for item in self.detail.split():
            k, sep, v = item.partition("=")
            if sep:
                out[k] = v
        return out

    def format(self) -> str:
        return f"{self.time:.3f}\t{self.node}\t{self.component}\t{self.kind}\t{self.detail}"


def parse_trace_line(text: str) -> TraceLine:
    parts = text.rstrip("\n").split("\t")
    if len(parts) != 5:
        raise ValueError(f"malformed trace line: {text!r}")
    return TraceLine(float(parts[0]), parts[1], parts[2], parts[3], parts[4])


def read_trace(path: Path | str) -> list[TraceLine]:
    with open(path, encoding="utf-8") as fh:
        return [parse_trace_line(line) for line in fh if line.strip()]


class Tracer:
    def __init__(self, path: Path | str | None = None):
        self.lines: list[TraceLine] = []
        self._fh = open(path, "w", encoding="utf-8", newline="\n") if path is not None else None

    def emit(self, time: float, node, component: str, kind: str, detail: str = "") -> None:
        line = TraceLine(time, "-" if node is None else str(node), component, kind, detail)
        self.lines.append(line)
        if self._fh is not None:
            self._fh.write(line.format() + "\n")

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def text(self) -> str:
        return "".join(line.format() + "\n" for line in self.lines)

    def select(self, kind: str | None = None, **match) -> list[TraceLine]:
        out = []
        for line in self.lines:
            if kind is not None and line.kind != kind:
                continue
            f = line.fields()
            if all(f.get(k) == str(v) for k, v in match.items()):
                out.append(line)
        return out
