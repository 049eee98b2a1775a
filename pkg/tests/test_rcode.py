import random
import struct

import pytest
from hypothesis import given, settings, strategies as st

from relsim.ariel import DecodeError, Instruction, Op, RCodeProgram, decode_rcode, disassemble, encode_rcode

import oracles

END_BYTES = bytes.fromhex("52 43 4F 44 01 00 01 00 00 00 FF 00")


def test_end_only_encoding():
    assert encode_rcode(RCodeProgram()) == END_BYTES
    assert decode_rcode(END_BYTES) == RCodeProgram()


def test_opcode_table():
    table = {
        0x01: "PRED_FAULTY", 0x02: "PRED_TRANSIENT", 0x03: "PRED_ISOLATED", 0x04: "PRED_RESTARTED",
        0x05: "PRED_ACTIVE", 0x06: "PRED_PHASE_EQ", 0x10: "AND", 0x11: "OR", 0x12: "NOT",
        0x20: "JUMP_IF_FALSE", 0x21: "JUMP", 0x30: "ACT_RESTART", 0x31: "ACT_TERMINATE",
        0x32: "ACT_ISOLATE", 0x33: "ACT_START", 0x34: "ACT_SEND", 0x35: "ACT_WARN", 0xFF: "END",
    }
    assert {int(op): op.name for op in Op} == table


def test_send_layout_bytes():
    prog = RCodeProgram((Instruction(Op.ACT_SEND, (1, 2, 3)), Instruction(Op.END)))
    assert encode_rcode(prog)[10:] == bytes([0x34, 3]) + struct.pack("<3I", 1, 2, 3) + bytes([0xFF, 0])


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_roundtrip_random_programs(seed):
    prog = oracles.random_program(random.Random(seed))
    data = encode_rcode(prog)
    assert decode_rcode(data) == prog
    assert encode_rcode(decode_rcode(data)) == data


def _patch(data: bytes, offset: int, new: bytes) -> bytes:
    return data[:offset] + new + data[offset + len(new):]


JIF_PROG = RCodeProgram((Instruction(Op.PRED_ACTIVE, (0, 1)), Instruction(Op.JUMP_IF_FALSE, (2,)),
                         Instruction(Op.END)))


@pytest.mark.parametrize("mutate,offset,reason", [
    (lambda b: b"XCOD" + b[4:], 0, "bad magic"),
    (lambda b: b[:8], 8, "truncated"),
    (lambda b: _patch(b, 4, b"\x02\x00"), 4, "version"),
    (lambda b: _patch(b, 10, b"\x07"), 10, "unknown opcode"),
    (lambda b: _patch(b, 11, b"\x01"), 11, "operand count"),
    (lambda b: _patch(b, 22, struct.pack("<I", 9)), 22, "out of range"),
    (lambda b: _patch(b, 12, struct.pack("<I", 3)), 12, "entity kind"),
    (lambda b: b + b"\x00", 28, "trailing"),
])
def test_decode_errors(mutate, offset, reason):
    data = encode_rcode(JIF_PROG)
    with pytest.raises(DecodeError) as ei:
        decode_rcode(mutate(data))
    assert ei.value.offset == offset
    assert reason in ei.value.reason


def test_missing_end_rejected():
    data = b"RCOD" + struct.pack("<HI", 1, 1) + bytes([0x10, 0])
    with pytest.raises(DecodeError, match="END"):
        decode_rcode(data)


def test_encode_rejects_invalid_program():
    with pytest.raises(ValueError):
        encode_rcode(RCodeProgram((Instruction(Op.JUMP, (5,)), Instruction(Op.END))))
    with pytest.raises(ValueError):
        encode_rcode(RCodeProgram((Instruction(Op.AND),)))


def test_disassembly():
    assert disassemble(JIF_PROG).splitlines() == ["0: PRED_ACTIVE NODE 1", "1: JUMP_IF_FALSE 2", "2: END"]
