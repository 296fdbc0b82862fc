"""Edit selection: agreement boosting, dual-threshold filtering, 1-D span NMS and rewrite."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .alignment import Edit, apply_edits
from .candidates import Candidate, CandidateSet, aggregate
from .classifier import LinearModel, ShapeError

# per-dataset thresholds from the threshold ablation
TAU_PRESETS = {"qalb14": 0.7, "qalb15-l1": 0.8, "qalb15-l2": 0.6}


@dataclass(frozen=True)
class CombineConfig:
    tau: float = 0.7
    alpha: float = 0.9
    beta: float = 0.1
    cap: float = 1.5
    iou_theta: float = 0.0

    def __post_init__(self):
        if not 0 < self.tau < 1:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.cap <= 0:
            raise ValueError(f"cap must be > 0, got {self.cap}")
        if not 0 <= self.iou_theta <= 1:
            raise ValueError(f"iou_theta must lie in [0, 1], got {self.iou_theta}")


@dataclass(frozen=True)
class ScoredCandidate:
    candidate: Candidate
    p_raw: float
    p_adj: float

    @property
    def edit(self) -> Edit:
        return self.candidate.edit

    @property
    def agreement(self) -> int:
        return self.candidate.agreement


@dataclass(frozen=True)
class TraceRecord:
    edit: Edit
    systems: Tuple[int, ...]
    p_raw: float
    p_adj: float
    status: str  # kept, or the stage that dropped the edit


def boost(p_raw: float, n: int, beta: float, cap: float) -> float:
    if n < 1:
        raise ValueError("agreement count must be >= 1")
    return p_raw * min(1.0 + beta * (n - 1), cap)


def score_candidates(cands: CandidateSet, model: LinearModel, cfg: CombineConfig) -> List[ScoredCandidate]:
    if model.k != cands.k or tuple(model.type_set) != tuple(cands.type_set):
        raise ShapeError(f"model layout k={model.k} {model.type_set} does not match "
                         f"{cands.k} systems {cands.type_set}")
    if not cands.candidates:
        return []
    probs = model.predict_proba(cands.features())
    return [ScoredCandidate(c, float(p), boost(float(p), c.agreement, cfg.beta, cfg.cap))
            for c, p in zip(cands.candidates, probs)]


def dual_filter(scored: Sequence[ScoredCandidate], tau: float, alpha: float) -> List[ScoredCandidate]:
    floor = alpha * tau
    return [s for s in scored if s.p_raw >= tau and s.p_adj >= floor]


def iou(e1: Edit, e2: Edit) -> float:
    """1-D intersection over union of two half-open spans.

    Two insertions (both spans empty) give 0/0; they count as full overlap at the
    same position and as disjoint otherwise.
    """
    inter = max(0, min(e1.b, e2.b) - max(e1.a, e2.a))
    union = (e1.b - e1.a) + (e2.b - e2.a) - inter
    if union == 0:
        return 1.0 if e1.a == e2.a else 0.0
    return inter / union


def _inside(ins: Edit, span: Edit) -> bool:
    return ins.is_insertion and not span.is_insertion and span.a < ins.a < span.b


def blocks(kept: Edit, e: Edit, theta: float) -> bool:
    """True when ``e`` may not join a selection that already holds ``kept``."""
    if kept.is_insertion and e.is_insertion:
        return kept.a == e.a
    if _inside(e, kept) or _inside(kept, e):
        return True
    return iou(kept, e) > theta


def priority(s) -> tuple:
    """Sort key: score desc, then agreement desc, start, end, replacement."""
    e = s.edit
    return (-s.p_adj, -s.agreement, e.a, e.b, e.replacement)


def nms(scored: Sequence[ScoredCandidate], iou_theta: float = 0.0) -> List[ScoredCandidate]:
    kept = []
    for s in sorted(scored, key=priority):
        if not any(blocks(k.edit, s.edit, iou_theta) for k in kept):
            kept.append(s)
    return sorted(kept, key=lambda s: s.edit)


def applicable_subset(selected: Sequence[ScoredCandidate]) -> Tuple[List[ScoredCandidate], List[ScoredCandidate]]:
    """Split an NMS result into edits that can be rewritten together and leftovers.

    Only needed when ``iou_theta > 0`` lets partially overlapping spans through;
    the higher-priority edit wins.
    """
    ok, dropped = [], []
    for s in sorted(selected, key=priority):
        if any(blocks(k.edit, s.edit, 0.0) for k in ok):
            dropped.append(s)
        else:
            ok.append(s)
    return sorted(ok, key=lambda s: s.edit), dropped


def select(cands: CandidateSet, model: LinearModel, cfg: CombineConfig,
           trace: Optional[list] = None) -> List[ScoredCandidate]:
    """Run scoring through NMS and return the edits to apply, sorted by span."""
    scored = score_candidates(cands, model, cfg)
    filtered = dual_filter(scored, cfg.tau, cfg.alpha)
    after_nms = nms(filtered, cfg.iou_theta)
    final, overlap = applicable_subset(after_nms)
    if trace is not None:
        status = {id(s): "kept" for s in final}
        status.update((id(s), "dropped:overlap") for s in overlap)
        nms_ids = {id(s) for s in after_nms}
        filt_ids = {id(s) for s in filtered}
        for s in scored:
            if id(s) not in filt_ids:
                st = "dropped:raw" if s.p_raw < cfg.tau else "dropped:adjusted"
            elif id(s) not in nms_ids:
                st = "dropped:nms"
            else:
                st = status[id(s)]
            trace.append(TraceRecord(s.edit, tuple(sorted(s.candidate.proposed_by)), s.p_raw, s.p_adj, st))
    return final


def combine_sentence(source: Sequence[str], hypotheses: Sequence[Sequence[str]], model: LinearModel,
                     cfg: CombineConfig = CombineConfig(), trace: Optional[list] = None) -> List[str]:
    if len(hypotheses) != model.k:
        raise ShapeError(f"model expects {model.k} systems, got {len(hypotheses)} hypotheses")
    cands = aggregate(source, hypotheses, model.type_set)
    chosen = select(cands, model, cfg, trace)
    return apply_edits(source, [s.edit for s in chosen])


def combine_corpus(sources, hypotheses_per_system, model, cfg=CombineConfig(), trace=None):
    """Combine a whole corpus; ``hypotheses_per_system[j][i]`` is system j's sentence i."""
    out = []
    for i, src in enumerate(sources):
        sent_trace = [] if trace is not None else None
        out.append(combine_sentence(src, [h[i] for h in hypotheses_per_system], model, cfg, sent_trace))
        if trace is not None:
            trace.extend((i, r) for r in sent_trace)
    return out
