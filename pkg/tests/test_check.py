import pytest

from relsim.check import AssertionSyntaxError, check, evaluate, parse_assertions
from relsim.sim.trace import TraceLine, Tracer, parse_trace_line, read_trace

LINES = [
    TraceLine(0.0, "-", "WORLD", "START", "seed=1"),
    TraceLine(100.0, "1", "BB", "NOTIFY", "seq=1:1 entity=T10"),
    TraceLine(105.0, "0", "BB", "RINT_RUN", "trigger=1:1"),
    TraceLine(105.0, "0", "BB", "CMD", "verb=RESTART target=T10"),
    TraceLine(300.0, "0", "BB", "CMD", "verb=SEND target=G3 payload=1"),
]


def one(text):
    (a,) = parse_assertions(text)
    return evaluate(a, LINES)


def test_trace_line_format_roundtrip():
    line = TraceLine(1.23456, "2", "BB", "CMD", "verb=WARN target=T1")
    assert line.format() == "1.235\t2\tBB\tCMD\tverb=WARN target=T1"
    assert parse_trace_line(line.format()).fields()["target"] == "T1"


def test_tracer_writes_file(tmp_path):
    t = Tracer(tmp_path / "t.tsv")
    t.emit(1.0, None, "WORLD", "START", "x=1")
    t.emit(2.0, 3, "BB", "CMD", "")
    t.close()
    assert (tmp_path / "t.tsv").read_text() == t.text()
    assert [l.node for l in read_trace(tmp_path / "t.tsv")] == ["-", "3"]


def test_occurs_and_absent():
    assert one("EVENT_OCCURS kind=CMD verb=RESTART target=T10").passed
    assert not one("EVENT_OCCURS kind=CMD verb=ISOLATE").passed
    out = one("EVENT_ABSENT kind=CMD node=0")
    assert not out.passed and "trace line 4" in out.message
    assert one("EVENT_ABSENT kind=CMD after=400").passed
    assert one("EVENT_ABSENT kind=CMD before=105").passed


def test_ordered():
    assert one("ORDERED_PAIR kind=NOTIFY ; kind=RINT_RUN ; kind=CMD verb=RESTART ; kind=CMD verb=SEND").passed
    out = one("ORDERED_PAIR kind=CMD verb=SEND ; kind=CMD verb=RESTART")
    assert not out.passed and "trace line 5" in out.message


def test_within():
    assert one("WITHIN_MS 5 kind=NOTIFY ; kind=CMD").passed
    out = one("WITHIN_MS 4.9 kind=NOTIFY ; kind=CMD")
    assert not out.passed and "trace line 2" in out.message
    assert one("WITHIN_MS 1 kind=HEAL ; kind=CMD").passed  # vacuous


def test_comments_and_multiple():
    asserts = parse_assertions("# c\n\nEVENT_OCCURS kind=START  # trailing\nEVENT_ABSENT kind=FAULT\n")
    assert [o.passed for o in check(LINES, asserts)] == [True, True]


@pytest.mark.parametrize("bad", [
    "EVENT_SOMETIMES kind=X",
    "EVENT_OCCURS",
    "EVENT_OCCURS kind",
    "ORDERED_PAIR kind=A",
    "WITHIN_MS kind=A ; kind=B",
    "WITHIN_MS 5 kind=A",
    "EVENT_OCCURS kind=A after=soon",
    "EVENT_OCCURS kind=A ; kind=B",
])
def test_malformed(bad):
    with pytest.raises(AssertionSyntaxError):
        parse_assertions(bad)
