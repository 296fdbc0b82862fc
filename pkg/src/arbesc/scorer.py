"""MaxMatch-style corpus scoring with per-sentence best-annotator selection."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .alignment import extract_edits
from .m2 import M2Sentence

MATCHING_POLICY = "exact (a, b, replacement) match over canonical alignment edits; best annotator per sentence by running F0.5"


class CorpusError(ValueError):
    pass


def f_beta(p: float, r: float, beta: float = 0.5) -> float:
    b2 = beta * beta
    denom = b2 * p + r
    return (1 + b2) * p * r / denom if denom > 0 else 0.0


@dataclass(frozen=True)
class ScoreReport:
    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 1.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 1.0

    @property
    def f1(self) -> float:
        return f_beta(self.precision, self.recall, 1.0)

    @property
    def f05(self) -> float:
        return f_beta(self.precision, self.recall, 0.5)

    def __add__(self, other):
        return ScoreReport(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    def as_dict(self):
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "precision": self.precision,
                "recall": self.recall, "f1": self.f1, "f05": self.f05}

    def to_text(self, title="") -> str:
        lines = [f"# matching: {MATCHING_POLICY}"]
        if title:
            lines.append(f"# {title}")
        lines.append(f"{'TP':>6} {'FP':>6} {'FN':>6} {'Prec':>8} {'Rec':>8} {'F1':>8} {'F0.5':>8}")
        lines.append(f"{self.tp:>6} {self.fp:>6} {self.fn:>6} {self.precision:>8.4f} "
                     f"{self.recall:>8.4f} {self.f1:>8.4f} {self.f05:>8.4f}")
        lines.extend(f"{k}={v:.6f}" if isinstance(v, float) else f"{k}={v}" for k, v in self.as_dict().items())
        return "\n".join(lines) + "\n"


EMPTY = ScoreReport(0, 0, 0)


def sentence_counts(hyp_edits, gold_edits) -> ScoreReport:
    hyp = {e.key for e in hyp_edits}
    gold = {e.key for e in gold_edits}
    tp = len(hyp & gold)
    return ScoreReport(tp, len(hyp) - tp, len(gold) - tp)


def best_annotator(hyp_edits, gold: M2Sentence, running: ScoreReport = EMPTY) -> ScoreReport:
    """Counts for the annotator maximising running F0.5 (then tp, fewer fp, fewer fn, lowest id)."""
    best = None
    for ann, edits in gold.gold_edit_sets():
        counts = sentence_counts(hyp_edits, edits)
        total = running + counts
        key = (total.f05, counts.tp, -counts.fp, -counts.fn, -ann)
        if best is None or key > best[0]:
            best = (key, counts)
    return best[1]


def score_corpus(sources: Sequence[Sequence[str]], outputs: Sequence[Sequence[str]],
                 gold: Sequence[M2Sentence]) -> ScoreReport:
    if not len(sources) == len(outputs) == len(gold):
        raise CorpusError(f"corpus sizes differ: {len(sources)} sources, {len(outputs)} outputs, "
                          f"{len(gold)} gold sentences")
    total = EMPTY
    for i, (src, out, g) in enumerate(zip(sources, outputs, gold)):
        if list(src) != list(g.source_tokens):
            raise CorpusError(f"sentence {i}: source tokens differ from the gold S line")
        total = total + best_annotator(extract_edits(src, out), g, total)
    return total
