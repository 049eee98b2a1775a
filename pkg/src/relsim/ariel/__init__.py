"""The ARIEL configuration and recovery language."""

from __future__ import annotations

from relsim.ariel.ast import Script
from relsim.ariel.compiler import compile_recovery
from relsim.ariel.config import format_config, parse_config
from relsim.ariel.constants import ConstantTable, extract_constants
from relsim.ariel.errors import (
    ArielError,
    DecodeError,
    DuplicateConstant,
    LexError,
    MalformedDefine,
    ParseError,
    SemanticError,
    UnresolvedConstant,
    UnsupportedConstruct,
)
from relsim.ariel.lexer import Token, tokenize
from relsim.ariel.parser import IncludeResolver, parse
from relsim.ariel.rcode import Instruction, Op, RCodeProgram, decode_rcode, disassemble, encode_rcode


def translate(source: str, constants: ConstantTable | None = None,
              resolver: IncludeResolver | None = None) -> tuple[Script, RCodeProgram]:
    """tokenize + parse + compile in one call."""
    script = parse(tokenize(source), constants, resolver)
    return script, compile_recovery(script.recovery)


__all__ = [
    "ArielError", "ConstantTable", "DecodeError", "DuplicateConstant", "IncludeResolver",
    "Instruction", "LexError", "MalformedDefine", "Op", "ParseError", "RCodeProgram",
    "Script", "SemanticError", "Token", "UnresolvedConstant", "UnsupportedConstruct",
    "compile_recovery", "decode_rcode", "disassemble", "encode_rcode", "extract_constants",
    "format_config", "parse", "parse_config", "tokenize", "translate",
]
