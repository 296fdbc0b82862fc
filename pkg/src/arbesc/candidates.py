"""Candidate aggregation across systems and one-hot (system, edit type) features."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, List, Sequence

import numpy as np

from .alignment import TYPES, Edit, extract_edits


@dataclass(frozen=True)
class Candidate:
    edit: Edit
    proposed_by: FrozenSet[int]

    def __post_init__(self):
        if not self.proposed_by:
            raise ValueError("a candidate needs at least one proposing system")

    @property
    def agreement(self) -> int:
        return len(self.proposed_by)


@dataclass
class CandidateSet:
    source_tokens: List[str]
    candidates: List[Candidate]
    k: int
    type_set: tuple = field(default=TYPES)

    def __len__(self):
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    def features(self) -> np.ndarray:
        """Feature matrix, one row per candidate."""
        dim = self.k * len(self.type_set)
        if not self.candidates:
            return np.zeros((0, dim), dtype=np.float64)
        return np.stack([encode(c, self.k, self.type_set) for c in self.candidates])


def aggregate_edits(source: Sequence[str], edit_lists: Sequence[Sequence[Edit]],
                    type_set=TYPES) -> CandidateSet:
    """Merge per-system edit lists into deduplicated candidates keyed on (a, b, replacement)."""
    proposers = {}
    for j, edits in enumerate(edit_lists):
        for e in edits:
            proposers.setdefault(e, set()).add(j)
    cands = [Candidate(e, frozenset(js)) for e, js in sorted(proposers.items())]
    return CandidateSet(list(source), cands, len(edit_lists), tuple(type_set))


def aggregate(source: Sequence[str], hypotheses: Sequence[Sequence[str]], type_set=TYPES) -> CandidateSet:
    if not hypotheses:
        raise ValueError("need at least one hypothesis")
    return aggregate_edits(source, [extract_edits(source, h) for h in hypotheses], type_set)


def encode(c: Candidate, k: int, type_set=TYPES) -> np.ndarray:
    """System-major layout: bit ``j * len(type_set) + type_index`` is set for each proposer ``j``."""
    width = len(type_set)
    x = np.zeros(k * width, dtype=np.float64)
    t = type_set.index(c.edit.etype)
    for j in c.proposed_by:
        if not 0 <= j < k:
            raise ValueError(f"system index {j} outside [0, {k})")
        x[j * width + t] = 1.0
    return x
