import pytest

from relsim.ariel import (
    ParseError,
    SemanticError,
    UnresolvedConstant,
    UnsupportedConstruct,
    parse,
    tokenize,
)
from relsim.ariel.ast import Action, And, If, Not, Or, PhaseEq, Pred, ReplicatedGroupConfig, WatchdogConfig
from relsim.entities import PredKind, Verb, group, node, task

WATCHDOG_SRC = """INCLUDE "mydefinitions.h"
WATCHDOG {MYWD} WATCHES TASK {MYTASK}
    HEARTBEATS EVERY {HEARTBEAT} MS
    ON ERROR WARN TASK {CONTROLLER}
END WATCHDOG
"""
DEFS = {"MYWD": 4, "MYTASK": 7, "HEARTBEAT": 150, "CONTROLLER": 2}

NESTED_SRC = """IF [ FAULTY TASK {MYTASK} ]
THEN
    IF [ TRANSIENT TASK {MYTASK} ]
    THEN RESTART TASK {MYTASK}
    ELSE ISOLATE TASK {MYTASK}
         START TASK 8
    FI
FI
"""


def p(src, constants=None, resolver=None):
    return parse(tokenize(src), constants, resolver)


def test_watchdog_block():
    s = p(WATCHDOG_SRC, DEFS)
    assert s.configs == [WatchdogConfig(4, task(7), 150, task(2))]
    assert s.recovery == []


def test_include_resolved_through_resolver():
    header = "#define MYWD 4\n#define MYTASK 7\n#define HEARTBEAT 150\n#define CONTROLLER 2\n"
    s = p(WATCHDOG_SRC, resolver=lambda name: header if name == "mydefinitions.h" else None)
    assert s.watchdogs[0].period_ms == 150
    assert s.includes == ["mydefinitions.h"]


def test_missing_include_recorded():
    s = p(WATCHDOG_SRC, DEFS, resolver=lambda name: None)
    assert s.missing_includes == [("mydefinitions.h", 1)]


def test_nested_script_shape():
    s = p(NESTED_SRC, {"MYTASK": 7})
    assert len(s.recovery) == 1
    outer = s.recovery[0]
    assert outer.guard == Pred(PredKind.FAULTY, task(7))
    inner = outer.then[0]
    assert isinstance(inner, If) and inner.guard == Pred(PredKind.TRANSIENT, task(7))
    assert inner.then == (Action(Verb.RESTART, task(7)),)
    assert inner.orelse == (Action(Verb.ISOLATE, task(7)), Action(Verb.START, task(8)))


def test_two_actions_in_order():
    s = p("IF [ FAULTY TASK 10 ] THEN RESTART TASK 10 SEND 1 GROUP 3 FI")
    assert s.recovery == [If(Pred(PredKind.FAULTY, task(10)),
                             (Action(Verb.RESTART, task(10)), Action(Verb.SEND, group(3), 1)))]


def test_precedence_not_and_or():
    s = p("IF [ NOT FAULTY T1 AND ACTIVE N2 OR ISOLATED T3 ] THEN WARN T4 FI")
    a, b, c = Pred(PredKind.FAULTY, task(1)), Pred(PredKind.ACTIVE, node(2)), Pred(PredKind.ISOLATED, task(3))
    assert s.recovery[0].guard == Or(And(Not(a), b), c)


def test_parentheses_and_phase():
    s = p("IF [ PHASE T7 == 3 AND ( RESTARTED T7 OR NOT ACTIVE G2 ) ] THEN START T7 FI")
    g = s.recovery[0].guard
    assert g == And(PhaseEq(task(7), 3), Or(Pred(PredKind.RESTARTED, task(7)), Not(Pred(PredKind.ACTIVE, group(2)))))


def test_replicated_group():
    s = p("REPLICATED GROUP 5 MEMBERS TASK 11 T12 TASK {X} VOTING MAJORITY END REPLICATED", {"X": 13})
    assert s.groups == [ReplicatedGroupConfig(group(5), (task(11), task(12), task(13)))]


@pytest.mark.parametrize("src,exc", [
    ("RETRY", UnsupportedConstruct),
    ("IF [ FAULTY T1 ] THEN CONSENSUS FI", UnsupportedConstruct),
    ("IF [ FAULTY T1 ] THEN RESTART T1", ParseError),
    ("IF [ FAULTY T1 THEN RESTART T1 FI", ParseError),
    ("IF [ FAULTY TASK {NOPE} ] THEN FI", UnresolvedConstant),
    ("IF [ FAULTY T {NOPE} ] THEN FI", ParseError),
    ("IF [ FAULTY T1 ] THEN SEND 1 NODE 2 FI", SemanticError),
    ("IF [ FAULTY T1 ] THEN WARN NODE 2 FI", SemanticError),
    ("IF [ FAULTY T1 ] THEN ISOLATE GROUP 2 FI", SemanticError),
    ("WATCHDOG 1 WATCHES TASK 2 HEARTBEATS EVERY 0 MS ON ERROR WARN TASK 3 END WATCHDOG", SemanticError),
    ("REPLICATED GROUP 1 MEMBERS T2 T2 VOTING MAJORITY END REPLICATED", SemanticError),
    ("IF [ PHASE T1 == 1.5 ] THEN FI", ParseError),
    ("FI", ParseError),
])
def test_errors(src, exc):
    with pytest.raises(exc):
        p(src)


def test_parse_error_reports_expected_set():
    with pytest.raises(ParseError) as ei:
        p("IF [ FAULTY T1 ] THEN BOGUS FI")
    e = ei.value
    assert (e.line, e.column) == (1, 23)
    assert {"RESTART", "FI", "IF"} <= e.expected


def test_constant_substitution_is_textual():
    from relsim.ariel import compile_recovery, encode_rcode

    lit = p("IF [ FAULTY TASK 7 ] THEN SEND 8 GROUP 1 FI")
    sym = p("IF [ FAULTY TASK {A} ] THEN SEND {B} GROUP {C} FI", {"A": 7, "B": 8, "C": 1})
    assert encode_rcode(compile_recovery(lit.recovery)) == encode_rcode(compile_recovery(sym.recovery))
