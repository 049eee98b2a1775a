"""R-code: the flat instruction format executed by RINT, and its binary codec.

Binary layout (all integers little-endian)::

    magic   b"RCOD"
    version u16  (= 1)
    count   u32  number of instructions
    then per instruction: opcode u8, operand count u8, operands u32 * count

Entity operands take two slots: kind (0 node, 1 task, 2 group) then id.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field

from relsim.ariel.errors import DecodeError
from relsim.entities import EntityKind, EntityRef

MAGIC = b"RCOD"
VERSION = 1
U32_MAX = 0xFFFFFFFF


class Op(enum.IntEnum):
    PRED_FAULTY = 0x01
    PRED_TRANSIENT = 0x02
    PRED_ISOLATED = 0x03
    PRED_RESTARTED = 0x04
    PRED_ACTIVE = 0x05
    PRED_PHASE_EQ = 0x06
    AND = 0x10
    OR = 0x11
    NOT = 0x12
    JUMP_IF_FALSE = 0x20
    JUMP = 0x21
    ACT_RESTART = 0x30
    ACT_TERMINATE = 0x31
    ACT_ISOLATE = 0x32
    ACT_START = 0x33
    ACT_SEND = 0x34
    ACT_WARN = 0x35
    END = 0xFF


ARITY: dict[Op, int] = {
    Op.PRED_FAULTY: 2, Op.PRED_TRANSIENT: 2, Op.PRED_ISOLATED: 2,
    Op.PRED_RESTARTED: 2, Op.PRED_ACTIVE: 2, Op.PRED_PHASE_EQ: 3,
    Op.AND: 0, Op.OR: 0, Op.NOT: 0,
    Op.JUMP_IF_FALSE: 1, Op.JUMP: 1,
    Op.ACT_RESTART: 2, Op.ACT_TERMINATE: 2, Op.ACT_ISOLATE: 2,
    Op.ACT_START: 2, Op.ACT_SEND: 3, Op.ACT_WARN: 2,
    Op.END: 0,
}

# operand index where an entity (kind, id) pair starts, per opcode
ENTITY_SLOT: dict[Op, int] = {
    op: (1 if op is Op.ACT_SEND else 0)
    for op in Op
    if op.name.startswith(("PRED_", "ACT_"))
}

JUMPS = frozenset({Op.JUMP_IF_FALSE, Op.JUMP})


@dataclass(frozen=True)
class Instruction:
    op: Op
    operands: tuple[int, ...] = ()

    def entity(self) -> EntityRef:
        k = ENTITY_SLOT[self.op]
        return EntityRef(EntityKind(self.operands[k]), self.operands[k + 1])

    def __str__(self) -> str:
        if self.op in ENTITY_SLOT:
            k = ENTITY_SLOT[self.op]
            ent = EntityKind(self.operands[k]).name + " " + str(self.operands[k + 1])
            rest = [str(x) for x in self.operands[:k]] + [ent] + [str(x) for x in self.operands[k + 2:]]
            return f"{self.op.name} " + " ".join(rest)
        if self.operands:
            return f"{self.op.name} " + " ".join(map(str, self.operands))
        return self.op.name


@dataclass(frozen=True)
class RCodeProgram:
    instructions: tuple[Instruction, ...] = field(default=(Instruction(Op.END),))
    version: int = VERSION

    def __len__(self) -> int:
        return len(self.instructions)

    def __getitem__(self, pc: int) -> Instruction:
        return self.instructions[pc]

    def validate(self) -> None:
        """Raise ValueError unless the structural invariants hold."""
        if not self.instructions or self.instructions[-1].op is not Op.END:
            raise ValueError("program must end with END")
        for pc, ins in enumerate(self.instructions):
            if len(ins.operands) != ARITY[ins.op]:
                raise ValueError(f"pc {pc}: {ins.op.name} takes {ARITY[ins.op]} operands")
            if any(not 0 <= x <= U32_MAX for x in ins.operands):
                raise ValueError(f"pc {pc}: operand out of u32 range")
            if ins.op in ENTITY_SLOT and ins.operands[ENTITY_SLOT[ins.op]] > 2:
                raise ValueError(f"pc {pc}: bad entity kind")
            if ins.op in JUMPS and ins.operands[0] >= len(self.instructions):
                raise ValueError(f"pc {pc}: jump target out of range")


def disassemble(program: RCodeProgram) -> str:
    width = len(str(len(program) - 1))
    return "\n".join(f"{pc:>{width}}: {ins}" for pc, ins in enumerate(program.instructions))


def encode_rcode(program: RCodeProgram) -> bytes:
    program.validate()
    out = bytearray(MAGIC)
    out += struct.pack("<HI", program.version, len(program.instructions))
    for ins in program.instructions:
        out += struct.pack("<BB", int(ins.op), len(ins.operands))
        out += struct.pack(f"<{len(ins.operands)}I", *ins.operands)
    return bytes(out)


def decode_rcode(data: bytes) -> RCodeProgram:
    if len(data) < 4 or data[:4] != MAGIC:
        raise DecodeError(0, "bad magic")
    if len(data) < 10:
        raise DecodeError(len(data), "truncated header")
    version, count = struct.unpack_from("<HI", data, 4)
    if version != VERSION:
        raise DecodeError(4, f"unsupported version {version}")
    off = 10
    instructions = []
    for _ in range(count):
        start = off
        if off + 2 > len(data):
            raise DecodeError(off, "truncated instruction")
        code, nops = data[off], data[off + 1]
        try:
            op = Op(code)
        except ValueError:
            raise DecodeError(start, f"unknown opcode 0x{code:02X}") from None
        if nops != ARITY[op]:
            raise DecodeError(start + 1, f"wrong operand count {nops} for {op.name}")
        off += 2
        if off + 4 * nops > len(data):
            raise DecodeError(off, "truncated operands")
        operands = struct.unpack_from(f"<{nops}I", data, off)
        if op in ENTITY_SLOT and operands[ENTITY_SLOT[op]] > 2:
            raise DecodeError(off + 4 * ENTITY_SLOT[op], f"bad entity kind {operands[ENTITY_SLOT[op]]}")
        if op in JUMPS and operands[0] >= count:
            raise DecodeError(off, f"jump target {operands[0]} out of range")
        off += 4 * nops
        instructions.append(Instruction(op, tuple(operands)))
    if off != len(data):
        raise DecodeError(off, "trailing bytes")
    if not instructions or instructions[-1].op is not Op.END:
        raise DecodeError(off, "program does not end with END")
    return RCodeProgram(tuple(instructions), version)
