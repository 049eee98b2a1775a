"""Recursive-descent parser for ARIEL.

Grammar::

    program   := { INCLUDE string | if-clause | watchdog | replicated }
    if-clause := IF '[' guard ']' THEN { action | if-clause }
                 [ ELSE { action | if-clause } ] FI
    guard     := term { OR term }
    term      := factor { AND factor }
    factor    := NOT factor | '(' guard ')' | predicate
    predicate := (FAULTY|TRANSIENT|ISOLATED|RESTARTED|ACTIVE) entity
               | PHASE entity '==' integer
    entity    := (NODE|TASK|GROUP) intref | N integer | T integer | G integer
    intref    := integer | '{' identifier '}'
    action    := (RESTART|TERMINATE|ISOLATE|START) entity
               | SEND intref entity | WARN entity
    watchdog  := WATCHDOG intref WATCHES TASK intref HEARTBEATS EVERY intref MS
                 ON ERROR WARN TASK intref END WATCHDOG
    replicated:= REPLICATED GROUP intref MEMBERS entity { entity }
                 VOTING MAJORITY END REPLICATED
"""

from __future__ import annotations

from typing import Callable

from relsim.ariel import ast
from relsim.ariel.constants import ConstantTable, extract_constants, merge_constants
from relsim.ariel.errors import ParseError, SemanticError, UnresolvedConstant, UnsupportedConstruct
from relsim.ariel.lexer import Token
from relsim.entities import VERB_TARGETS, EntityKind, EntityRef, PredKind, Verb

# returns header text for an INCLUDE path, or None when it cannot be found
IncludeResolver = Callable[[str], "str | None"]

_PREDICATES = {k.name: k for k in PredKind}
_KIND_WORDS = {"NODE": EntityKind.NODE, "TASK": EntityKind.TASK, "GROUP": EntityKind.GROUP}
_ABBREVS = {"N": EntityKind.NODE, "T": EntityKind.TASK, "G": EntityKind.GROUP}
_PLAIN_VERBS = {"RESTART": Verb.RESTART, "TERMINATE": Verb.TERMINATE,
                "ISOLATE": Verb.ISOLATE, "START": Verb.START}
_ACTION_START = frozenset(_PLAIN_VERBS) | {"SEND", "WARN"}
_ENTITY_START = frozenset(_KIND_WORDS) | frozenset(_ABBREVS)
_TOP_START = frozenset({"INCLUDE", "IF", "WATCHDOG", "REPLICATED"})
_UNSUPPORTED = frozenset({"RETRY", "CONSENSUS"})


class _Parser:
    def __init__(self, tokens: list[Token], constants: ConstantTable,
                 resolver: IncludeResolver | None):
        self.toks = tokens
        self.pos = 0
        self.constants = dict(constants)
        self.resolver = resolver
        self.includes: list[str] = []
        self.missing_includes: list[tuple[str, int]] = []

    # -- token plumbing -------------------------------------------------
    def peek(self) -> Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def at(self, *lexemes: str) -> bool:
        t = self.peek()
        return t is not None and t.kind in ("keyword", "symbol") and t.lexeme in lexemes

    def fail(self, expected) -> ParseError:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else None
            line = last.line if last else 1
            col = last.column + len(last.lexeme) if last else 1
            return ParseError(line, col, expected, "end of input")
        if t.kind == "real":
            return ParseError(t.line, t.column, expected, f"real literal {t.lexeme} (not allowed here)")
        if t.kind in ("keyword", "symbol") and t.lexeme in _UNSUPPORTED:
            return UnsupportedConstruct(t.lexeme, t.line, t.column)
        return ParseError(t.line, t.column, expected, t.describe())

    def expect(self, *lexemes: str) -> Token:
        if not self.at(*lexemes):
            raise self.fail(set(lexemes))
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def integer(self) -> int:
        t = self.peek()
        if t is None or t.kind != "integer":
            raise self.fail({"integer"})
        self.pos += 1
        return int(t.lexeme)

    # -- grammar ---------------------------------------------------------
    def program(self) -> ast.Script:
        script = ast.Script()
        while self.peek() is not None:
            if self.at("INCLUDE"):
                self.include()
            elif self.at("IF"):
                script.recovery.append(self.if_clause())
            elif self.at("WATCHDOG"):
                script.configs.append(self.watchdog())
            elif self.at("REPLICATED"):
                script.configs.append(self.replicated())
            else:
                raise self.fail(_TOP_START)
        return script

    def include(self) -> None:
        kw = self.expect("INCLUDE")
        t = self.peek()
        if t is None or t.kind != "string":
            raise self.fail({"string"})
        self.pos += 1
        path = t.value
        self.includes.append(path)
        if self.resolver is None:
            return
        text = self.resolver(path)
        if text is None:
            self.missing_includes.append((path, kw.line))
            return
        merge_constants(self.constants, extract_constants(text))

    def intref(self) -> int:
        if self.at("{"):
            open_ = self.expect("{")
            t = self.peek()
            if t is None or t.kind != "identifier":
                raise self.fail({"identifier"})
            self.pos += 1
            self.expect("}")
            if t.lexeme not in self.constants:
                raise UnresolvedConstant(t.lexeme, open_.line, open_.column)
            return self.constants[t.lexeme]
        return self.integer()

    def entity(self) -> EntityRef:
        t = self.peek()
        if self.at(*_KIND_WORDS):
            self.pos += 1
            kind = _KIND_WORDS[t.lexeme]
            value = self.intref()
        elif self.at(*_ABBREVS):
            self.pos += 1
            kind = _ABBREVS[t.lexeme]
            value = self.integer()
        else:
            raise self.fail(_ENTITY_START)
        if value < 0:
            raise SemanticError(f"entity id must be non-negative, got {value}", t.line, t.column)
        return EntityRef(kind, value)

    def if_clause(self) -> ast.If:
        self.expect("IF")
        self.expect("[")
        guard = self.guard()
        self.expect("]")
        self.expect("THEN")
        then = self.body()
        orelse: tuple = ()
        if self.at("ELSE"):
            self.pos += 1
            orelse = self.body()
        self.expect("FI")
        return ast.If(guard, then, orelse)

    def body(self) -> tuple:
        stmts = []
        while True:
            if self.at("IF"):
                stmts.append(self.if_clause())
            elif self.at(*_ACTION_START):
                stmts.append(self.action())
            elif self.at("ELSE", "FI"):
                return tuple(stmts)
            else:
                raise self.fail(_ACTION_START | {"IF", "ELSE", "FI"})

    def guard(self) -> ast.Guard:
        g = self.term()
        while self.at("OR"):
            self.pos += 1
            g = ast.Or(g, self.term())
        return g

    def term(self) -> ast.Guard:
        g = self.factor()
        while self.at("AND"):
            self.pos += 1
            g = ast.And(g, self.factor())
        return g

    def factor(self) -> ast.Guard:
        if self.at("NOT"):
            self.pos += 1
            return ast.Not(self.factor())
        if self.at("("):
            self.pos += 1
            g = self.guard()
            self.expect(")")
            return g
        if self.at(*_PREDICATES):
            kind = _PREDICATES[self.toks[self.pos].lexeme]
            self.pos += 1
            return ast.Pred(kind, self.entity())
        if self.at("PHASE"):
            self.pos += 1
            ent = self.entity()
            self.expect("==")
            return ast.PhaseEq(ent, self.integer())
        raise self.fail(set(_PREDICATES) | {"PHASE", "NOT", "("})

    def action(self) -> ast.Action:
        t = self.peek()
        self.pos += 1
        if t.lexeme == "SEND":
            payload = self.intref()
            if payload < 0:
                raise SemanticError(f"SEND payload must be non-negative, got {payload}", t.line, t.column)
            verb, target = Verb.SEND, self.entity()
        elif t.lexeme == "WARN":
            verb, payload, target = Verb.WARN, None, self.entity()
        else:
            verb, payload, target = _PLAIN_VERBS[t.lexeme], None, self.entity()
        if target.kind not in VERB_TARGETS[verb]:
            raise SemanticError(f"{verb.value} cannot target a {target.kind.name}", t.line, t.column)
        return ast.Action(verb, target, payload)

    def task_ref(self) -> EntityRef:
        t = self.peek()
        ent = self.entity()
        if ent.kind is not EntityKind.TASK:
            raise SemanticError(f"expected a TASK, got {ent}", t.line, t.column)
        return ent

    def watchdog(self) -> ast.WatchdogConfig:
        self.expect("WATCHDOG")
        wid = self.intref()
        self.expect("WATCHES")
        watched = self.task_ref()
        self.expect("HEARTBEATS")
        self.expect("EVERY")
        at = self.peek()
        period = self.intref()
        if period <= 0:
            raise SemanticError(f"heartbeat period must be positive, got {period}", at.line, at.column)
        self.expect("MS")
        self.expect("ON")
        self.expect("ERROR")
        self.expect("WARN")
        warn = self.task_ref()
        self.expect("END")
        self.expect("WATCHDOG")
        return ast.WatchdogConfig(wid, watched, period, warn)

    def replicated(self) -> ast.ReplicatedGroupConfig:
        start = self.expect("REPLICATED")
        self.expect("GROUP")
        gid = self.intref()
        self.expect("MEMBERS")
        members = [self.task_ref()]
        while self.at(*_ENTITY_START):
            members.append(self.task_ref())
        self.expect("VOTING")
        self.expect("MAJORITY")
        self.expect("END")
        self.expect("REPLICATED")
        if len(members) < 2 or len(set(members)) != len(members):
            raise SemanticError("a replicated group needs at least two distinct members",
                                start.line, start.column)
        return ast.ReplicatedGroupConfig(EntityRef(EntityKind.GROUP, gid), tuple(members))


def parse(tokens: list[Token], constants: ConstantTable | None = None,
          resolver: IncludeResolver | None = None) -> ast.Script:
    """Parse a token stream into a :class:`~relsim.ariel.ast.Script`.

    ``INCLUDE`` statements are handed to ``resolver``; the constants they
    define become visible to the tokens that follow. Without a resolver the
    statement is accepted and ignored, so callers may pre-load the table.
    The returned script records the include paths and any the resolver could
    not find (``script.includes`` / ``script.missing_includes``).
    """
    p = _Parser(tokens, constants or {}, resolver)
    script = p.program()
    script.includes = p.includes
    script.missing_includes = p.missing_includes
    return script
