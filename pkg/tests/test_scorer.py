import pytest
from hypothesis import given
from hypothesis import strategies as st

from arbesc.alignment import Edit, apply_edits, extract_edits
from arbesc.m2 import M2Sentence, RawEdit, m2_from_edits, parse_m2
from arbesc.scorer import CorpusError, ScoreReport, f_beta, score_corpus

from .oracles import token_lists


def T(s):
    return s.split()


@pytest.mark.parametrize("p, r, expected", [
    (0.9033, 0.6161, 0.8263),
    (0.9218, 0.6379, 0.8464),
    (0.7347, 0.4552, 0.6555),
])
def test_f05_reproduces_published_triples(p, r, expected):
    # published values are rounded to two decimals of a percent
    assert f_beta(p, r, 0.5) == pytest.approx(expected, abs=0.01)


@given(st.floats(0.0, 1.0), st.floats(0.1, 4.0))
def test_f_beta_symmetric_point(x, beta):
    assert f_beta(x, x, beta) == pytest.approx(x)


def test_f_beta_zero_denominator():
    assert f_beta(0.0, 0.0) == 0.0


def test_report_conventions():
    r = ScoreReport(0, 0, 5)
    assert (r.precision, r.recall, r.f05) == (1.0, 0.0, 0.0)
    assert ScoreReport(0, 0, 0).f05 == 1.0
    assert ScoreReport(2, 1, 1) + ScoreReport(1, 0, 2) == ScoreReport(3, 1, 3)
    text = ScoreReport(3, 1, 1).to_text()
    assert "tp=3" in text and "f05=0.750000" in text and text.startswith("# matching:")


GOLD = parse_m2("S a b c d\nA 1 2|||R|||x|||REQUIRED|||-NONE-|||0\nA 3 4|||U||||||REQUIRED|||-NONE-|||0\n\n"
                "S e f\nA 2 2|||M|||g|||REQUIRED|||-NONE-|||0\n\n")
SOURCES = [T("a b c d"), T("e f")]


def test_perfect_and_empty_outputs():
    perfect = [T("a x c"), T("e f g")]
    r = score_corpus(SOURCES, perfect, GOLD)
    assert (r.tp, r.fp, r.fn, r.f05) == (3, 0, 0, 1.0)
    r = score_corpus(SOURCES, SOURCES, GOLD)
    assert (r.tp, r.fp, r.fn, r.precision, r.recall, r.f05) == (0, 0, 3, 1.0, 0.0, 0.0)


def test_partial_output():
    r = score_corpus(SOURCES, [T("a x c d"), T("z f")], GOLD)
    assert (r.tp, r.fp, r.fn) == (1, 1, 2)


def test_best_annotator_chosen_per_sentence():
    gold = parse_m2("S a b\nA 0 1|||R|||x|||REQUIRED|||-NONE-|||0\nA 1 2|||R|||y|||REQUIRED|||-NONE-|||1\n")
    assert score_corpus([T("a b")], [T("a y")], gold) == ScoreReport(1, 0, 0)
    assert score_corpus([T("a b")], [T("x b")], gold) == ScoreReport(1, 0, 0)


def test_corpus_errors():
    with pytest.raises(CorpusError):
        score_corpus(SOURCES, SOURCES[:1], GOLD)
    with pytest.raises(CorpusError):
        score_corpus([T("q q q q"), T("e f")], SOURCES, GOLD)


@given(st.lists(st.tuples(token_lists(6), token_lists(6)), max_size=5))
def test_self_scoring_is_perfect(pairs):
    sources = [s for s, _ in pairs]
    outputs = [h for _, h in pairs]
    gold = [m2_from_edits(s, extract_edits(s, h)) for s, h in pairs]
    r = score_corpus(sources, outputs, gold)
    assert r.precision == r.recall == 1.0


@given(token_lists(8), token_lists(8), st.data())
def test_dropping_a_true_positive_never_raises_recall(src, hyp, data):
    edits = extract_edits(src, hyp)
    if not edits:
        return
    gold = [m2_from_edits(src, edits)]
    drop = data.draw(st.integers(0, len(edits) - 1))
    reduced = apply_edits(src, edits[:drop] + edits[drop + 1:])
    assert score_corpus([src], [reduced], gold).recall <= score_corpus([src], [hyp], gold).recall
