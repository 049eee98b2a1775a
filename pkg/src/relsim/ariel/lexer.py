"""Tokenizer for ARIEL source text.

Keywords are upper-case and case-sensitive. ``#`` starts a comment running to
the end of the line. Entity abbreviations written without a space (``N3``,
``TASK10``) are split into the kind keyword and an integer token, except
inside ``{...}`` where every word is a constant name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from relsim.ariel.errors import LexError

KEYWORDS = frozenset(
    """
    IF THEN ELSE FI AND OR NOT
    FAULTY TRANSIENT ISOLATED RESTARTED ACTIVE PHASE
    NODE TASK GROUP N T G
    RESTART TERMINATE ISOLATE START SEND WARN
    WATCHDOG WATCHES HEARTBEATS EVERY MS ON ERROR END
    REPLICATED MEMBERS VOTING MAJORITY
    INCLUDE RETRY CONSENSUS
    """.split()
)

SYMBOLS = ("==", "[", "]", "{", "}", "(", ")")


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | identifier | integer | real | string | symbol
    lexeme: str
    line: int
    column: int

    @property
    def value(self):
        if self.kind == "integer":
            return int(self.lexeme)
        if self.kind == "real":
            return float(self.lexeme)
        if self.kind == "string":
            return self.lexeme[1:-1]
        return self.lexeme

    def describe(self) -> str:
        return self.lexeme if self.kind in ("keyword", "symbol") else f"{self.kind} {self.lexeme}"


_WS = re.compile(r"[ \t\r\f\v]+")
_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"\d+(\.\d+)?")
_STRING = re.compile(r'"[^"\n]*"')
_ABBREV = re.compile(r"(NODE|TASK|GROUP|N|T|G)(\d+)")


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)

    def emit(kind: str, lexeme: str, offset: int = 0) -> None:
        tokens.append(Token(kind, lexeme, line, col + offset))

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line, col = line + 1, 1
            continue
        m = _WS.match(source, i)
        if m:
            col += m.end() - i
            i = m.end()
            continue
        if ch == "#":
            end = source.find("\n", i)
            end = n if end < 0 else end
            col += end - i
            i = end
            continue
        m = _WORD.match(source, i)
        if m:
            word = m.group()
            in_braces = bool(tokens) and tokens[-1].lexeme == "{" and tokens[-1].kind == "symbol"
            ab = _ABBREV.fullmatch(word)
            if in_braces:
                emit("identifier", word)
            elif word in KEYWORDS:
                emit("keyword", word)
            elif ab:
                emit("keyword", ab.group(1))
                emit("integer", ab.group(2), len(ab.group(1)))
            else:
                emit("identifier", word)
            col += len(word)
            i = m.end()
            continue
        m = _NUMBER.match(source, i)
        if m:
            emit("real" if m.group(1) else "integer", m.group())
            col += len(m.group())
            i = m.end()
            continue
        m = _STRING.match(source, i)
        if m:
            emit("string", m.group())
            col += len(m.group())
            i = m.end()
            continue
        for sym in SYMBOLS:
            if source.startswith(sym, i):
                emit("symbol", sym)
                col += len(sym)
                i += len(sym)
                break
        else:
            raise LexError(line, col, ch)
    return tokens
