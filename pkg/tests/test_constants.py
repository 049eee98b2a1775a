import pytest

from relsim.ariel import DuplicateConstant, MalformedDefine, extract_constants
from relsim.ariel.constants import merge_constants


def test_basic_defines():
    assert extract_constants("#define MYWD 4\n#define HEARTBEAT 150") == {"MYWD": 4, "HEARTBEAT": 150}


def test_no_defines():
    assert extract_constants("int x;\n/* nothing */\n") == {}


def test_duplicate():
    with pytest.raises(DuplicateConstant) as ei:
        extract_constants("#define X 1\n#define X 2")
    assert ei.value.name == "X"


def test_malformed_value():
    with pytest.raises(MalformedDefine) as ei:
        extract_constants("#define A 1\n#define B foo")
    assert ei.value.line == 2


def test_c_header_noise_tolerated():
    hdr = """#ifndef H
#define H
#  define SPACED   7   // comment
#define HEX 0x1F
#define PAREN (12)
#define SUFFIX 5u /* c */
#include <stdio.h>
"""
    assert extract_constants(hdr) == {"SPACED": 7, "HEX": 31, "PAREN": 12, "SUFFIX": 5}


def test_merge_allows_identical_redefinition():
    table = {"A": 1}
    merge_constants(table, {"A": 1, "B": 2})
    assert table == {"A": 1, "B": 2}
    with pytest.raises(DuplicateConstant):
        merge_constants(table, {"B": 3})


def test_corpus_header(scenarios_dir):
    table = extract_constants((scenarios_dir / "mydefinitions.h").read_text())
    assert {k: table[k] for k in ("MYWD", "MYTASK", "HEARTBEAT", "CONTROLLER")} == \
        {"MYWD": 4, "MYTASK": 7, "HEARTBEAT": 150, "CONTROLLER": 2}
