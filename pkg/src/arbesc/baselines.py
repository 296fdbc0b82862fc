"""Reference combination strategies: edit-level voting, sentence-level weighted voting, MBR, plain ESC."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .alignment import Edit, apply_edits, token_levenshtein
from .candidates import CandidateSet, aggregate
from .classifier import LinearModel


@dataclass
class VoteConfig:
    min_votes: int = 2
    system_subset: Optional[Sequence[int]] = None
    weights: Optional[Sequence[float]] = None

    def validate(self, k: int) -> None:
        if not 1 <= self.min_votes <= k:
            raise ValueError(f"min_votes must lie in [1, {k}], got {self.min_votes}")
        if self.system_subset is not None:
            bad = [j for j in self.system_subset if not 0 <= j < k]
            if bad or not self.system_subset:
                raise ValueError(f"invalid system subset {list(self.system_subset)} for k={k}")
        if self.weights is not None:
            if len(self.weights) != k or min(self.weights) < 0 or not any(self.weights):
                raise ValueError("weights must be k non-negative reals, not all zero")


def _overlaps(x: Edit, y: Edit) -> bool:
    if x.is_insertion and y.is_insertion:
        return x.a == y.a
    if x.is_insertion:
        return y.a < x.a < y.b
    if y.is_insertion:
        return x.a < y.a < x.b
    return max(x.a, y.a) < min(x.b, y.b)


def _greedy(ranked) -> List[Edit]:
    chosen = []
    for e in ranked:
        if all(not _overlaps(e, c) for c in chosen):
            chosen.append(e)
    return sorted(chosen)


def edit_majority_vote(cands: CandidateSet, cfg: VoteConfig) -> List[str]:
    """Apply every edit proposed by at least ``min_votes`` systems of the subset."""
    cfg.validate(cands.k)
    subset = set(range(cands.k) if cfg.system_subset is None else cfg.system_subset)
    if cfg.min_votes > len(subset):
        raise ValueError(f"min_votes {cfg.min_votes} exceeds subset size {len(subset)}")
    voted = []
    for c in cands.candidates:
        votes = len(c.proposed_by & subset)
        if votes >= cfg.min_votes:
            voted.append((votes, c.edit))
    voted.sort(key=lambda ve: (-ve[0], ve[1].a, ve[1].b, ve[1].replacement))
    return apply_edits(cands.source_tokens, _greedy(e for _, e in voted))


def weighted_sentence_vote(source, hypotheses: Sequence[Sequence[str]], weights=None) -> List[str]:
    """Pick the output string with the largest summed system weight; ties go to the lowest system."""
    if not hypotheses:
        return list(source)
    weights = [1.0] * len(hypotheses) if weights is None else list(weights)
    tally = {}
    first = {}
    for j, (h, w) in enumerate(zip(hypotheses, weights)):
        key = tuple(h)
        tally[key] = tally.get(key, 0.0) + w
        first.setdefault(key, j)
    best = max(tally, key=lambda key: (tally[key], -first[key]))
    return list(best)


def similarity(x: Sequence[str], y: Sequence[str]) -> Fraction:
    # exact arithmetic so tied hypotheses really tie and the lowest index wins
    return 1 - Fraction(token_levenshtein(x, y), max(len(x), len(y), 1))


def mbr_select(hypotheses: Sequence[Sequence[str]]) -> List[str]:
    """Hypothesis with the highest mean similarity to the others (lowest index on ties)."""
    k = len(hypotheses)
    if k == 0:
        raise ValueError("need at least one hypothesis")
    if k == 1:
        return list(hypotheses[0])
    sim = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            sim[i][j] = sim[j][i] = similarity(hypotheses[i], hypotheses[j])
    means = [sum(row) / (k - 1) for row in sim]  # self-similarity excluded
    best = max(range(k), key=lambda i: (means[i], -i))
    return list(hypotheses[best])


def esc_select(cands: CandidateSet, model: LinearModel, tau: float) -> List[Edit]:
    """Plain ESC: threshold raw probabilities, then keep non-conflicting edits best-first."""
    if not cands.candidates:
        return []
    probs = model.predict_proba(cands.features())
    passed = [(float(p), c) for p, c in zip(probs, cands.candidates) if p >= tau]
    passed.sort(key=lambda pc: (-pc[0], -pc[1].agreement, pc[1].edit.a, pc[1].edit.b, pc[1].edit.replacement))
    return _greedy(c.edit for _, c in passed)


def esc_combine(source, hypotheses, model: LinearModel, tau: float = 0.5) -> List[str]:
    cands = aggregate(source, hypotheses, model.type_set)
    return apply_edits(source, esc_select(cands, model, tau))
