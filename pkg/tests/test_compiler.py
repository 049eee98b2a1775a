import random

from hypothesis import given, settings, strategies as st

from relsim.ariel import Instruction, Op, RCodeProgram, compile_recovery, parse, tokenize
from relsim.ariel.config import format_config, parse_config
from relsim.ariel.ast import ReplicatedGroupConfig, WatchdogConfig
from relsim.entities import group, task
from relsim.vm import run

import oracles


def test_empty_section():
    assert compile_recovery([]) == RCodeProgram((Instruction(Op.END),))


def test_transient_example_layout():
    s = parse(tokenize("IF [ FAULTY TASK 10 ] THEN RESTART TASK 10 SEND 1 GROUP 3 FI"))
    prog = compile_recovery(s.recovery)
    assert prog.instructions == (
        Instruction(Op.PRED_FAULTY, (1, 10)),
        Instruction(Op.JUMP_IF_FALSE, (4,)),
        Instruction(Op.ACT_RESTART, (1, 10)),
        Instruction(Op.ACT_SEND, (1, 2, 3)),
        Instruction(Op.END),
    )


def test_nested_layout():
    src = """IF [ FAULTY T7 ] THEN
               IF [ TRANSIENT T7 ] THEN RESTART T7 ELSE ISOLATE T7 START T8 FI
             FI"""
    prog = compile_recovery(parse(tokenize(src)).recovery)
    ops = [(i.op, i.operands) for i in prog.instructions]
    assert ops == [
        (Op.PRED_FAULTY, (1, 7)),
        (Op.JUMP_IF_FALSE, (8,)),
        (Op.PRED_TRANSIENT, (1, 7)),
        (Op.JUMP_IF_FALSE, (6,)),
        (Op.ACT_RESTART, (1, 7)),
        (Op.JUMP, (8,)),
        (Op.ACT_ISOLATE, (1, 7)),
        (Op.ACT_START, (1, 8)),
        (Op.END, ()),
    ]


def test_sequential_guards_fall_through():
    src = "IF [ ACTIVE N0 ] THEN RESTART T1 FI IF [ ACTIVE N1 ] THEN RESTART T2 FI"
    prog = compile_recovery(parse(tokenize(src)).recovery)
    assert prog[1] == Instruction(Op.JUMP_IF_FALSE, (3,))
    assert prog[3].op is Op.PRED_ACTIVE


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_compiled_program_matches_ast(seed):
    rng = random.Random(seed)
    stmts, atoms = oracles.random_case(rng)
    prog = compile_recovery(stmts)
    prog.validate()
    for flags in oracles.all_assignments(atoms):
        if not oracles.consistent(flags):
            continue
        got = [(c.verb, c.target, c.payload) for c in run(prog, oracles.snapshot_for(flags))]
        assert got == oracles.interpret(stmts, flags)


def test_config_format_roundtrip():
    cfgs = [WatchdogConfig(4, task(7), 150, task(2)),
            ReplicatedGroupConfig(group(5), (task(11), task(12), task(13)))]
    text = format_config(cfgs)
    assert text.splitlines() == ["WATCHDOG 4 7 150 2", "RGROUP 5 11 12 13"]
    assert parse_config(text) == cfgs
