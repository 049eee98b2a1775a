"""RINT: the stack machine that executes r-code against a database snapshot."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from relsim.ariel.rcode import ENTITY_SLOT, Op, RCodeProgram
from relsim.entities import EntityKind, EntityRef, Verb


@dataclass(frozen=True)
class EntityState:
    active: bool = False
    faulty: bool = False
    transient: bool = False
    isolated: bool = False
    restarted: bool = False
    phase: int = 0


UNKNOWN = EntityState()

DbSnapshot = Mapping[EntityRef, EntityState]


@dataclass(frozen=True)
class RecoveryCommand:
    verb: Verb
    target: EntityRef
    payload: int | None = None
    origin_node: int = 0

    def __str__(self) -> str:
        pay = f" {self.payload}" if self.payload is not None else ""
        return f"{self.verb.value}{pay} {self.target}"


class VmFault(Exception):
    def __init__(self, pc: int, reason: str):
        self.pc = pc
        self.reason = reason
        super().__init__(f"VM fault at pc {pc}: {reason}")


_PRED_FIELD = {
    Op.PRED_FAULTY: "faulty",
    Op.PRED_TRANSIENT: "transient",
    Op.PRED_ISOLATED: "isolated",
    Op.PRED_RESTARTED: "restarted",
    Op.PRED_ACTIVE: "active",
}
_ACT_VERB = {
    Op.ACT_RESTART: Verb.RESTART,
    Op.ACT_TERMINATE: Verb.TERMINATE,
    Op.ACT_ISOLATE: Verb.ISOLATE,
    Op.ACT_START: Verb.START,
    Op.ACT_SEND: Verb.SEND,
    Op.ACT_WARN: Verb.WARN,
}


def _entity(pc: int, ops: tuple[int, ...], slot: int) -> EntityRef:
    try:
        return EntityRef(EntityKind(ops[slot]), ops[slot + 1])
    except (ValueError, IndexError):
        raise VmFault(pc, "malformed entity operand") from None


def _pop(stack: list[bool], pc: int) -> bool:
    if not stack:
        raise VmFault(pc, "stack underflow")
    return stack.pop()


def _step_guard(program: RCodeProgram, pc: int, stack: list[bool], snapshot: DbSnapshot) -> bool:
    """Execute one predicate/connective instruction. False if ``pc`` is not one."""
    ins = program[pc]
    op = ins.op
    if op in _PRED_FIELD:
        state = snapshot.get(_entity(pc, ins.operands, 0), UNKNOWN)
        stack.append(bool(getattr(state, _PRED_FIELD[op])))
    elif op is Op.PRED_PHASE_EQ:
        state = snapshot.get(_entity(pc, ins.operands, 0), UNKNOWN)
        stack.append(state.phase == ins.operands[2])
    elif op is Op.NOT:
        stack.append(not _pop(stack, pc))
    elif op in (Op.AND, Op.OR):
        right = _pop(stack, pc)
        left = _pop(stack, pc)
        stack.append(left and right if op is Op.AND else left or right)
    else:
        return False
    return True


def eval_guard(program: RCodeProgram, start_pc: int, snapshot: DbSnapshot) -> bool:
    """Evaluate the guard beginning at ``start_pc`` up to its JUMP_IF_FALSE."""
    stack: list[bool] = []
    pc = start_pc
    while True:
        if not 0 <= pc < len(program):
            raise VmFault(pc, "guard runs off the program")
        if program[pc].op is Op.JUMP_IF_FALSE:
            if len(stack) != 1:
                raise VmFault(pc, f"guard left {len(stack)} values on the stack")
            return stack[0]
        if not _step_guard(program, pc, stack, snapshot):
            raise VmFault(pc, f"{program[pc].op.name} inside a guard")
        pc += 1


def run(program: RCodeProgram, snapshot: DbSnapshot, origin_node: int = 0) -> list[RecoveryCommand]:
    """Evaluate every guarded action once and return the commands to dispatch.

    The snapshot is only read. Compiled programs never jump backwards, so
    every instruction executes at most once; a longer run means hand-made
    bytecode and raises VmFault.
    """
    commands: list[RecoveryCommand] = []
    stack: list[bool] = []
    pc = 0
    for _ in range(len(program) + 1):
        if not 0 <= pc < len(program):
            raise VmFault(pc, "pc out of range")
        ins = program[pc]
        op = ins.op
        if op is Op.END:
            return commands
        if _step_guard(program, pc, stack, snapshot):
            pc += 1
        elif op is Op.JUMP_IF_FALSE:
            pc = pc + 1 if _pop(stack, pc) else ins.operands[0]
        elif op is Op.JUMP:
            pc = ins.operands[0]
        elif op in _ACT_VERB:
            slot = ENTITY_SLOT[op]
            payload = ins.operands[0] if op is Op.ACT_SEND else None
            commands.append(RecoveryCommand(_ACT_VERB[op], _entity(pc, ins.operands, slot),
                                            payload, origin_node))
            pc += 1
        else:  # pragma: no cover - Op is a closed enum
            raise VmFault(pc, f"unknown opcode {op!r}")
    raise VmFault(pc, "step budget exceeded")
