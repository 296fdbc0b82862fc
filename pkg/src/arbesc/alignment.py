"""Token-level alignment and span-edit extraction.

Edits are half-open spans over source token indices (0-based). An edit with
``a == b`` inserts before source token ``a``; an empty replacement deletes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

MATCH, SUB, DEL, INS = "=", "S", "D", "I"

TYPES = ("M", "R", "U")


class EditConflictError(ValueError):
    pass


class EditRangeError(IndexError):
    pass


@dataclass(frozen=True, order=True)
class Edit:
    a: int
    b: int
    replacement: str = ""

    def __post_init__(self):
        if self.a < 0 or self.b < self.a:
            raise EditRangeError(f"invalid span ({self.a}, {self.b})")
        if self.a == self.b and not self.replacement:
            raise ValueError(f"no-op edit at position {self.a}")

    @property
    def etype(self) -> str:
        if self.a == self.b:
            return "M"
        if not self.replacement:
            return "U"
        return "R"

    @property
    def is_insertion(self) -> bool:
        return self.a == self.b

    @property
    def tokens(self) -> List[str]:
        return self.replacement.split()

    @property
    def key(self) -> Tuple[int, int, str]:
        return (self.a, self.b, self.replacement)

    def __str__(self):
        return f"({self.a},{self.b},{self.replacement!r},{self.etype})"


def edit_from_tokens(a: int, b: int, tokens: Sequence[str]) -> Edit:
    return Edit(a, b, " ".join(tokens))


def _distance_table(src: Sequence[str], hyp: Sequence[str]) -> List[List[int]]:
    n, m = len(src), len(hyp)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        d[i][0] = i
    for j in range(1, m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        si = src[i - 1]
        prev, row = d[i - 1], d[i]
        for j in range(1, m + 1):
            cost = prev[j - 1] + (si != hyp[j - 1])
            dele = prev[j] + 1
            ins = row[j - 1] + 1
            row[j] = min(cost, dele, ins)
    return d


def token_levenshtein(x: Sequence[str], y: Sequence[str]) -> int:
    """Unit-cost edit distance between two token sequences."""
    if not x:
        return len(y)
    if not y:
        return len(x)
    prev = list(range(len(y) + 1))
    for i, xi in enumerate(x, 1):
        cur = [i] + [0] * len(y)
        for j, yj in enumerate(y, 1):
            cur[j] = min(prev[j - 1] + (xi != yj), prev[j] + 1, cur[j - 1] + 1)
        prev = cur
    return prev[-1]


def align(src: Sequence[str], hyp: Sequence[str]) -> List[Tuple[str, int, int]]:
    """Optimal unit-cost alignment as a list of ``(op, i, j)`` steps.

    ``i``/``j`` are the source/hypothesis positions *before* the step. Ties in
    the backtrace prefer match, then substitution, deletion, insertion.
    """
    d = _distance_table(src, hyp)
    i, j = len(src), len(hyp)
    ops = []
    while i > 0 or j > 0:
        here = d[i][j]
        if i > 0 and j > 0 and src[i - 1] == hyp[j - 1] and here == d[i - 1][j - 1]:
            ops.append((MATCH, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and here == d[i - 1][j - 1] + 1:
            ops.append((SUB, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and here == d[i - 1][j] + 1:
            ops.append((DEL, i - 1, j))
            i -= 1
        else:
            ops.append((INS, i, j - 1))
            j -= 1
    ops.reverse()
    return ops


def extract_edits(source: Sequence[str], hypothesis: Sequence[str]) -> List[Edit]:
    """Canonical span edits turning ``source`` into ``hypothesis``.

    Maximal runs of adjacent non-match alignment steps collapse into a single
    edit, so the result never holds overlapping spans or two insertions at
    one position.
    """
    edits = []
    run_start = None  # (source index, hypothesis index) where the run began
    i = j = 0
    for op, i, j in align(source, hypothesis):
        if op == MATCH:
            if run_start is not None:
                a, ha = run_start
                edits.append(edit_from_tokens(a, i, hypothesis[ha:j]))
                run_start = None
        elif run_start is None:
            run_start = (i, j)
    if run_start is not None:
        a, ha = run_start
        edits.append(edit_from_tokens(a, len(source), hypothesis[ha:]))
    return edits


def check_applicable(edits: Sequence[Edit], n_tokens: int) -> List[Edit]:
    """Return ``edits`` sorted by span; raise if they cannot be applied together."""
    ordered = sorted(edits)
    for e in ordered:
        if e.b > n_tokens:
            raise EditRangeError(f"edit {e} outside sentence of {n_tokens} tokens")
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.a < prev.b:
            raise EditConflictError(f"overlapping edits {prev} and {cur}")
        if prev.is_insertion and cur.is_insertion and prev.a == cur.a:
            raise EditConflictError(f"two insertions at position {cur.a}")
    return ordered


def apply_edits(source: Sequence[str], edits: Sequence[Edit]) -> List[str]:
    out = []
    pos = 0
    for e in check_applicable(edits, len(source)):
        out.extend(source[pos:e.a])
        out.extend(e.tokens)
        pos = e.b
    out.extend(source[pos:])
    return out
