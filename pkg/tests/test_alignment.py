import pytest
from hypothesis import given

from arbesc.alignment import (Edit, EditConflictError, EditRangeError, align, apply_edits,
                              extract_edits, token_levenshtein)

from .oracles import levenshtein, token_lists


def toks(s):
    return s.split()


@pytest.mark.parametrize("src, hyp, expected", [
    ("a b c", "a b c", []),
    ("a b c", "a x c", [Edit(1, 2, "x")]),
    ("a c", "a b c", [Edit(1, 1, "b")]),
    ("he eat food", "he ate food", [Edit(1, 2, "ate")]),
    ("a b c", "a c", [Edit(1, 2, "")]),
    ("", "a b", [Edit(0, 0, "a b")]),
    ("a b", "", [Edit(0, 2, "")]),
])
def test_extract_examples(src, hyp, expected):
    assert extract_edits(toks(src), toks(hyp)) == expected


def test_edit_types():
    assert Edit(3, 3, "on").etype == "M"
    assert Edit(1, 2, "x").etype == "R"
    assert Edit(1, 3, "").etype == "U"
    with pytest.raises(ValueError):
        Edit(2, 2, "")
    with pytest.raises(EditRangeError):
        Edit(3, 2, "x")


def test_adjacent_operations_merge_into_one_span():
    # delete + substitute over [1, 3) collapses into a single replacement
    assert extract_edits(toks("he has eat it"), toks("he eaten it")) == [Edit(1, 3, "eaten")]
    # insertion next to a substitution joins its span
    assert extract_edits(toks("a b c"), toks("a x y c")) == [Edit(1, 2, "x y")]


def test_backtrace_prefers_substitution_over_indel():
    ops = [op for op, _, _ in align(["a"], ["b"])]
    assert ops == ["S"]


def test_apply_examples():
    assert apply_edits(toks("a b"), []) == toks("a b")
    assert apply_edits(toks("a b c"), [Edit(0, 1, ""), Edit(2, 3, "d")]) == toks("b d")
    assert apply_edits(toks("a b"), [Edit(2, 2, "c")]) == toks("a b c")
    # insertion lands before the token at its position, ahead of a replacement starting there
    assert apply_edits(toks("a b"), [Edit(1, 2, "y"), Edit(1, 1, "x")]) == toks("a x y")


def test_apply_errors():
    with pytest.raises(EditConflictError):
        apply_edits(toks("a b c"), [Edit(0, 2, "x"), Edit(1, 3, "y")])
    with pytest.raises(EditConflictError):
        apply_edits(toks("a b c"), [Edit(1, 1, "x"), Edit(1, 1, "y")])
    with pytest.raises(EditConflictError):
        apply_edits(toks("a b c"), [Edit(0, 3, "x"), Edit(1, 1, "y")])
    with pytest.raises(EditRangeError):
        apply_edits(toks("a b"), [Edit(1, 3, "x")])


@given(token_lists(), token_lists())
def test_round_trip(src, hyp):
    assert apply_edits(src, extract_edits(src, hyp)) == hyp


@given(token_lists(), token_lists())
def test_canonical_and_minimal(src, hyp):
    edits = extract_edits(src, hyp)
    assert edits == sorted(edits)
    for e1, e2 in zip(edits, edits[1:]):
        assert e1.b < e2.a or (e1.b == e2.a and not (e1.is_insertion and e2.is_insertion))
        # maximal runs: consecutive edits are separated by at least one kept token
        assert e1.b < e2.a
    assert sum(e.b - e.a for e in edits) <= levenshtein(src, hyp)


@given(token_lists(8), token_lists(8))
def test_token_levenshtein_matches_oracle(x, y):
    assert token_levenshtein(x, y) == levenshtein(x, y)
