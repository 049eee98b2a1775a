import pytest
from hypothesis import given, strategies as st

from relsim.ariel import LexError, tokenize


def kinds(src):
    return [(t.kind, t.lexeme) for t in tokenize(src)]


def test_guard_with_constant_reference():
    toks = tokenize("IF [ FAULTY TASK {MYTASK} ]")
    assert [t.lexeme for t in toks] == ["IF", "[", "FAULTY", "TASK", "{", "MYTASK", "}", "]"]
    assert toks[5].kind == "identifier"


def test_empty_source():
    assert tokenize("") == []


def test_watchdog_header():
    assert kinds("WATCHDOG 3 WATCHES") == [("keyword", "WATCHDOG"), ("integer", "3"), ("keyword", "WATCHES")]


@pytest.mark.parametrize("src,kw,num", [("N3", "N", "3"), ("NODE3", "NODE", "3"), ("T10", "T", "10"),
                                        ("TASK10", "TASK", "10"), ("G0", "G", "0")])
def test_abbreviations_split(src, kw, num):
    assert kinds(src) == [("keyword", kw), ("integer", num)]
    assert tokenize(src)[1].column == len(kw) + 1


def test_abbreviation_not_split_inside_braces():
    assert kinds("{T10}") == [("symbol", "{"), ("identifier", "T10"), ("symbol", "}")]


def test_comment_and_positions():
    toks = tokenize("# header\n  RESTART T 4 # trailing\nFI")
    assert [(t.lexeme, t.line, t.column) for t in toks] == [
        ("RESTART", 2, 3), ("T", 2, 11), ("4", 2, 13), ("FI", 3, 1)]


def test_real_string_and_eqeq():
    assert kinds('1.5 "x.h" ==') == [("real", "1.5"), ("string", '"x.h"'), ("symbol", "==")]


def test_keywords_are_case_sensitive():
    assert kinds("if")[0] == ("identifier", "if")


@pytest.mark.parametrize("src,line,col,ch", [("IF @", 1, 4, "@"), ("FI\n  $", 2, 3, "$"), ('"open', 1, 1, '"')])
def test_lex_error_position(src, line, col, ch):
    with pytest.raises(LexError) as ei:
        tokenize(src)
    assert (ei.value.line, ei.value.column, ei.value.char) == (line, col, ch)


_piece = st.sampled_from(["IF", "THEN", "FI", "[", "]", "{", "}", "==", "(", ")", "T10", "N3",
                          "MYTASK", "42", "3.25", '"a.h"', "TASK", "x_1"])
_gap = st.sampled_from([" ", "  ", "\n", "\t", " # note\n"])


@given(st.lists(st.tuples(_piece, _gap), max_size=30))
def test_positions_index_back_into_source(parts):
    src = "".join(p + g for p, g in parts)
    lines = src.split("\n")
    rebuilt = []
    for t in tokenize(src):
        line = lines[t.line - 1]
        assert line[t.column - 1:t.column - 1 + len(t.lexeme)] == t.lexeme
        rebuilt.append(t.lexeme)
    # dropping whitespace and comments from the source leaves exactly the lexemes
    stripped = "".join(ln.split("#", 1)[0] for ln in lines)
    assert "".join(rebuilt) == "".join(stripped.split())
