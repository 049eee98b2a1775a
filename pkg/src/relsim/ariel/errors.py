"""Diagnostics raised by the ARIEL toolchain."""

from __future__ import annotations


class ArielError(Exception):
    """Base class; carries an optional source position for diagnostics."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}:{column}: " if line is not None else ""
        super().__init__(where + message)
        self.message = message


class LexError(ArielError):
    def __init__(self, line: int, column: int, char: str):
        self.char = char
        super().__init__(f"unexpected character {char!r}", line, column)


class DuplicateConstant(ArielError):
    def __init__(self, name: str, line: int | None = None):
        self.name = name
        super().__init__(f"duplicate definition of constant {name}", line)


class MalformedDefine(ArielError):
    def __init__(self, line: int, text: str = ""):
        self.text = text
        super().__init__(f"#define with non-integer value: {text.strip()!r}", line)


class ParseError(ArielError):
    def __init__(self, line: int, column: int, expected: frozenset[str] | set[str], found: str):
        self.expected = frozenset(expected)
        self.found = found
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"expected one of {{{exp}}}, found {found!r}", line, column)


class SemanticError(ArielError):
    """Well-formed syntax that violates a typing rule (e.g. SEND to a node)."""


class UnresolvedConstant(ArielError):
    def __init__(self, name: str, line: int | None = None, column: int | None = None):
        self.name = name
        super().__init__(f"unresolved symbolic constant {{{name}}}", line, column)


class UnsupportedConstruct(ArielError):
    def __init__(self, keyword: str, line: int | None = None, column: int | None = None):
        self.keyword = keyword
        super().__init__(f"{keyword} blocks are recognized but not supported", line, column)


class DecodeError(Exception):
    def __init__(self, offset: int, reason: str):
        self.offset = offset
        self.reason = reason
        super().__init__(f"r-code decode error at byte {offset}: {reason}")
