"""Reading and writing M2 annotation files and plain-text hypothesis files."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Sequence, Tuple

from .alignment import Edit

NONE_MARK = "-NONE-"
NOOP_TYPE = "noop"
CANONICAL_TYPES = ("M", "R", "U")


class M2FormatError(ValueError):
    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class M2RangeError(M2FormatError):
    pass


class InvalidEditError(ValueError):
    pass


@dataclass(frozen=True)
class RawEdit:
    a: int
    b: int
    correction: str
    raw_type: str

    def to_edit(self) -> Edit:
        return Edit(self.a, self.b, " ".join(self.correction.split()))


@dataclass
class M2Sentence:
    source_tokens: List[str]
    annotations: List[Tuple[int, List[RawEdit]]] = field(default_factory=list)

    def edits_for(self, annotator: int) -> List[Edit]:
        for ann, edits in self.annotations:
            if ann == annotator:
                return [e.to_edit() for e in edits]
        raise KeyError(annotator)

    def gold_edit_sets(self) -> List[Tuple[int, List[Edit]]]:
        """Canonical edit list per annotator; a block without annotations has one empty set."""
        if not self.annotations:
            return [(0, [])]
        return [(ann, [e.to_edit() for e in edits]) for ann, edits in self.annotations]


def _parse_a_line(line: str, line_no: int, n_tokens: int) -> Tuple[int, RawEdit]:
    fields = line[2:].split("|||")
    if len(fields) != 6:
        raise M2FormatError(f"expected 6 '|||' fields, got {len(fields)}", line_no)
    span, raw_type, correction, _, _, annotator = fields
    try:
        a, b = (int(x) for x in span.split())
        annotator = int(annotator)
    except ValueError:
        raise M2FormatError(f"bad span or annotator in {line!r}", line_no) from None
    if annotator < 0:
        raise M2FormatError(f"negative annotator id {annotator}", line_no)
    if raw_type == NOOP_TYPE or (a, b) == (-1, -1):
        return annotator, None
    if not raw_type:
        raise M2FormatError("empty edit type", line_no)
    if not 0 <= a <= b <= n_tokens:
        raise M2RangeError(f"span ({a}, {b}) outside sentence of {n_tokens} tokens", line_no)
    if correction == NONE_MARK:
        correction = ""
    if a == b and not correction.strip():
        raise M2FormatError(f"no-op insertion at {a}", line_no)
    return annotator, RawEdit(a, b, correction, raw_type)


def parse_m2(text: str) -> List[M2Sentence]:
    sentences = []
    current = None
    by_annotator = {}

    def flush():
        if current is not None:
            current.annotations = [
                (ann, sorted(edits, key=lambda e: (e.a, e.b))) for ann, edits in by_annotator.items()
            ]
            sentences.append(current)

    for line_no, line in enumerate(text.split("\n"), 1):
        line = line.rstrip("\r\n")
        if not line.strip():
            flush()
            current, by_annotator = None, {}
        elif line == "S" or line.startswith("S "):
            if current is not None:
                raise M2FormatError("S line without preceding blank line", line_no)
            current = M2Sentence(line[2:].split())
        elif line.startswith("A "):
            if current is None:
                raise M2FormatError("A line before any S line", line_no)
            annotator, edit = _parse_a_line(line, line_no, len(current.source_tokens))
            edits = by_annotator.setdefault(annotator, [])
            if edit is not None:
                edits.append(edit)
        else:
            raise M2FormatError(f"unrecognised line {line[:40]!r}", line_no)
    flush()
    return sentences


def serialize_m2(sentences: Sequence[M2Sentence]) -> str:
    out = []
    for sent in sentences:
        out.append("S " + " ".join(sent.source_tokens))
        for ann, edits in sent.annotations:
            if not edits:
                out.append(f"A -1 -1|||{NOOP_TYPE}|||{NONE_MARK}|||REQUIRED|||{NONE_MARK}|||{ann}")
            for e in edits:
                out.append(f"A {e.a} {e.b}|||{e.raw_type}|||{e.correction}|||REQUIRED|||{NONE_MARK}|||{ann}")
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


def unify_edit_types(e: RawEdit) -> RawEdit:
    """Collapse any annotated edit kind (merge, split, insert_after...) onto M/R/U by span shape."""
    empty = not e.correction.strip()
    if e.a == e.b:
        if empty:
            raise InvalidEditError(f"no-op edit at position {e.a}")
        return replace(e, raw_type="M")
    return replace(e, raw_type="U" if empty else "R")


def unify_sentence(sent: M2Sentence) -> M2Sentence:
    return M2Sentence(
        list(sent.source_tokens),
        [(ann, [unify_edit_types(e) for e in edits]) for ann, edits in sent.annotations],
    )


def m2_from_edits(source: Sequence[str], edits: Sequence[Edit], annotator: int = 0) -> M2Sentence:
    raws = [RawEdit(e.a, e.b, e.replacement, e.etype) for e in sorted(edits)]
    return M2Sentence(list(source), [(annotator, raws)])


def read_m2(path) -> List[M2Sentence]:
    return parse_m2(Path(path).read_text(encoding="utf-8"))


def write_m2(path, sentences: Sequence[M2Sentence]) -> None:
    Path(path).write_text(serialize_m2(sentences), encoding="utf-8")


def read_lines(path) -> List[List[str]]:
    """One whitespace-tokenised sentence per line."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.split() for line in lines]


def write_lines(path, sentences: Sequence[Sequence[str]]) -> None:
    Path(path).write_text("".join(" ".join(s) + "\n" for s in sentences), encoding="utf-8")
