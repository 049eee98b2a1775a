"""Code generator ("art"): guarded actions to stack-machine r-code."""

from __future__ import annotations

from typing import Iterable

from relsim.ariel import ast
from relsim.ariel.rcode import Instruction, Op, RCodeProgram
from relsim.entities import EntityRef, PredKind, Verb

_PRED_OPS = {
    PredKind.FAULTY: Op.PRED_FAULTY,
    PredKind.TRANSIENT: Op.PRED_TRANSIENT,
    PredKind.ISOLATED: Op.PRED_ISOLATED,
    PredKind.RESTARTED: Op.PRED_RESTARTED,
    PredKind.ACTIVE: Op.PRED_ACTIVE,
}
_ACT_OPS = {
    Verb.RESTART: Op.ACT_RESTART,
    Verb.TERMINATE: Op.ACT_TERMINATE,
    Verb.ISOLATE: Op.ACT_ISOLATE,
    Verb.START: Op.ACT_START,
    Verb.SEND: Op.ACT_SEND,
    Verb.WARN: Op.ACT_WARN,
}


def _ent(e: EntityRef) -> tuple[int, int]:
    return (int(e.kind), e.id)


class _Emitter:
    def __init__(self) -> None:
        self.code: list[list] = []  # [op, operands] pairs, patched in place

    def emit(self, op: Op, *operands: int) -> int:
        self.code.append([op, list(operands)])
        return len(self.code) - 1

    def patch(self, at: int, target: int) -> None:
        self.code[at][1][0] = target

    def guard(self, g: ast.Guard) -> None:
        if isinstance(g, ast.Pred):
            self.emit(_PRED_OPS[g.kind], *_ent(g.entity))
        elif isinstance(g, ast.PhaseEq):
            self.emit(Op.PRED_PHASE_EQ, *_ent(g.entity), g.phase)
        elif isinstance(g, ast.Not):
            self.guard(g.operand)
            self.emit(Op.NOT)
        elif isinstance(g, ast.And):
            self.guard(g.left)
            self.guard(g.right)
            self.emit(Op.AND)
        elif isinstance(g, ast.Or):
            self.guard(g.left)
            self.guard(g.right)
            self.emit(Op.OR)
        else:
            raise TypeError(f"not a guard: {g!r}")

    def stmts(self, body: Iterable[ast.Stmt]) -> None:
        for s in body:
            if isinstance(s, ast.If):
                self.if_(s)
            else:
                self.action(s)

    def action(self, a: ast.Action) -> None:
        if a.verb is Verb.SEND:
            self.emit(Op.ACT_SEND, a.payload, *_ent(a.target))
        else:
            self.emit(_ACT_OPS[a.verb], *_ent(a.target))

    def if_(self, node: ast.If) -> None:
        self.guard(node.guard)
        jif = self.emit(Op.JUMP_IF_FALSE, 0)
        self.stmts(node.then)
        if node.orelse:
            jmp = self.emit(Op.JUMP, 0)
            self.patch(jif, len(self.code))
            self.stmts(node.orelse)
            self.patch(jmp, len(self.code))
        else:
            self.patch(jif, len(self.code))


def compile_recovery(recovery: Iterable[ast.If]) -> RCodeProgram:
    """Lay out guarded actions sequentially and terminate with END.

    Each guard is emitted in postfix form followed by JUMP_IF_FALSE over its
    then-branch; an ELSE arm adds an unconditional JUMP past itself.
    """
    em = _Emitter()
    for clause in recovery:
        em.if_(clause)
    em.emit(Op.END)
    return RCodeProgram(tuple(Instruction(op, tuple(ops)) for op, ops in em.code))
