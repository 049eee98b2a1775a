"""Symbolic constants imported from C-style ``#define`` headers."""

from __future__ import annotations

import re

from relsim.ariel.errors import DuplicateConstant, MalformedDefine

ConstantTable = dict[str, int]

_DEFINE = re.compile(r"\s*#\s*define\b(.*)$")
_BODY = re.compile(r"\s+([A-Za-z_]\w*)(.*)$")
_COMMENT = re.compile(r"//.*$|/\*.*?\*/")


def _parse_int(text: str) -> int | None:
    text = text.strip()
    while text.startswith("(") and text.endswith(")"):
        text = text[1:-1].strip()
    text = text.rstrip("uUlL")
    try:
        return int(text, 0)
    except ValueError:
        return None


def extract_constants(header: str) -> ConstantTable:
    """Collect ``#define NAME <integer>`` lines; everything else is ignored.

    Value-less defines (include guards) are skipped. A define whose value is
    not an integer literal raises MalformedDefine.
    """
    table: ConstantTable = {}
    for lineno, raw in enumerate(header.splitlines(), start=1):
        m = _DEFINE.match(raw)
        if m is None:
            continue
        body = _BODY.match(_COMMENT.sub("", m.group(1)))
        if body is None:
            raise MalformedDefine(lineno, raw)
        name, rest = body.group(1), body.group(2)
        if not rest.strip():
            continue
        value = _parse_int(rest)
        if value is None:
            raise MalformedDefine(lineno, raw)
        if name in table:
            raise DuplicateConstant(name, lineno)
        table[name] = value
    return table


def merge_constants(into: ConstantTable, new: ConstantTable) -> None:
    """Merge ``new`` into ``into``; identical re-definitions are allowed."""
    for name, value in new.items():
        if name in into and into[name] != value:
            raise DuplicateConstant(name)
        into[name] = value
