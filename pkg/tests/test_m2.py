import pytest
from hypothesis import given
from hypothesis import strategies as st

from arbesc.alignment import Edit, apply_edits
from arbesc.m2 import (InvalidEditError, M2FormatError, M2RangeError, M2Sentence, RawEdit,
                       m2_from_edits, parse_m2, read_lines, serialize_m2, unify_edit_types, unify_sentence,
                       write_lines)


def test_parse_replace():
    [s] = parse_m2("S الولد ذهب\nA 1 2|||R|||ذهبوا|||REQUIRED|||-NONE-|||0\n")
    assert s.source_tokens == ["الولد", "ذهب"]
    assert s.annotations == [(0, [RawEdit(1, 2, "ذهبوا", "R")])]
    assert s.edits_for(0) == [Edit(1, 2, "ذهبوا")]


def test_parse_without_annotations():
    [s] = parse_m2("S a b c\n\n")
    assert s.annotations == []
    assert s.gold_edit_sets() == [(0, [])]


def test_insertion_at_end_is_legal():
    [s] = parse_m2("S a b c\nA 3 3|||M|||d|||REQUIRED|||-NONE-|||0\n")
    assert s.edits_for(0) == [Edit(3, 3, "d")]


def test_noop_and_none_marker():
    text = ("S a b\nA -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0\n"
            "A 0 1|||U|||-NONE-|||REQUIRED|||-NONE-|||1\n\n")
    [s] = parse_m2(text)
    assert s.annotations == [(0, []), (1, [RawEdit(0, 1, "", "U")])]
    assert parse_m2(serialize_m2([s])) == [s]


def test_multiple_blocks_and_sorting():
    text = ("S a b c\nA 2 3|||R|||z|||REQUIRED|||-NONE-|||0\nA 0 1|||R|||y|||REQUIRED|||-NONE-|||0\n\n"
            "S d\n\n")
    first, second = parse_m2(text)
    assert [e.a for e in first.annotations[0][1]] == [0, 2]
    assert second.source_tokens == ["d"]


@pytest.mark.parametrize("text, err, line", [
    ("S a b\nA 1 2|||R|||x|||REQUIRED|||0\n", M2FormatError, 2),
    ("S a b\nA 1 x|||R|||x|||REQUIRED|||-NONE-|||0\n", M2FormatError, 2),
    ("S a b\nA 1 3|||R|||x|||REQUIRED|||-NONE-|||0\n", M2RangeError, 2),
    ("S a b\nA 1 1|||M||||||REQUIRED|||-NONE-|||0\n", M2FormatError, 2),
    ("A 0 1|||R|||x|||REQUIRED|||-NONE-|||0\n", M2FormatError, 1),
    ("S a\nS b\n", M2FormatError, 2),
    ("S a\nQ nonsense\n", M2FormatError, 2),
])
def test_parse_errors_carry_line_number(text, err, line):
    with pytest.raises(err) as info:
        parse_m2(text)
    assert info.value.line_no == line


def test_serialize_edge_cases():
    assert serialize_m2([]) == ""
    assert serialize_m2([M2Sentence(["a", "b"])]) == "S a b\n\n"


@pytest.mark.parametrize("raw, expected", [
    (RawEdit(2, 2, "في", "insert_after"), RawEdit(2, 2, "في", "M")),
    (RawEdit(1, 3, "", "delete"), RawEdit(1, 3, "", "U")),
    (RawEdit(0, 2, "عبدالله", "merge"), RawEdit(0, 2, "عبدالله", "R")),
    (RawEdit(0, 1, "عبد الله", "split"), RawEdit(0, 1, "عبد الله", "R")),
    (RawEdit(0, 1, "x", "Edit"), RawEdit(0, 1, "x", "R")),
])
def test_unify(raw, expected):
    assert unify_edit_types(raw) == expected


def test_unify_rejects_noop():
    with pytest.raises(InvalidEditError):
        unify_edit_types(RawEdit(1, 1, "", "insert"))


def test_merge_is_one_replace_on_the_covered_tokens():
    # the two source tokens become the single merged token
    [raw] = parse_m2("S عبد الله جاء\nA 0 2|||merge|||عبدالله|||REQUIRED|||-NONE-|||0\n")
    s = unify_sentence(raw)
    assert apply_edits(s.source_tokens, s.edits_for(0)) == ["عبدالله", "جاء"]
    assert s.annotations[0][1][0].raw_type == "R"


WORDS = st.sampled_from(["a", "b", "ق", "ذهب", "x-y"])


@st.composite
def m2_sentences(draw):
    tokens = draw(st.lists(WORDS, max_size=8))
    n = len(tokens)
    annotations = []
    for ann in draw(st.lists(st.integers(0, 3), unique=True, max_size=3)):
        edits = []
        for _ in range(draw(st.integers(0, 3))):
            a = draw(st.integers(0, n))
            b = draw(st.integers(a, n))
            corr = draw(st.lists(WORDS, min_size=1 if a == b else 0, max_size=2))
            typ = draw(st.sampled_from(["M", "R", "U", "merge", "split"]))
            edits.append(RawEdit(a, b, " ".join(corr), typ))
        annotations.append((ann, sorted(edits, key=lambda e: (e.a, e.b))))
    return M2Sentence(tokens, annotations)


@given(st.lists(m2_sentences(), max_size=5))
def test_round_trip(sentences):
    text = serialize_m2(sentences)
    parsed = parse_m2(text)
    assert parsed == sentences
    assert serialize_m2(parsed) == text


@given(st.lists(m2_sentences(), max_size=5))
def test_unified_types_closed(sentences):
    for s in sentences:
        for _, edits in unify_sentence(s).annotations:
            assert {e.raw_type for e in edits} <= {"M", "R", "U"}
            assert all(0 <= e.a <= e.b <= len(s.source_tokens) for e in edits)


def test_m2_from_edits_types():
    s = m2_from_edits(["a", "b"], [Edit(1, 2, ""), Edit(0, 0, "x")])
    assert [(e.a, e.b, e.raw_type) for e in s.annotations[0][1]] == [(0, 0, "M"), (1, 2, "U")]


def test_plain_text_io(tmp_path):
    lines = [["a", "b"], [], ["ج"]]
    write_lines(tmp_path / "h.txt", lines)
    assert (tmp_path / "h.txt").read_text(encoding="utf-8") == "a b\n\nج\n"
    assert read_lines(tmp_path / "h.txt") == lines
