"""Token-level inter-annotator agreement over standoff annotation files.

A standoff file holds one annotation per line::

    id<TAB>KIND<TAB>s<sentence>:<start>-<end><TAB>normalized[<TAB>key=value...]

Sentence numbers are corpus-wide and 1-based, token offsets are 0-based and
inclusive.  An optional ``#corpus <sha256>`` line pins the file to one tagged
corpus; other ``#`` lines are comments.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .corpus import Review, corpus_checksum, corpus_sentences
from .errors import AgreementError, AnnotationFormatError
from .extract import PRECEDENCE, ConceptKind, SentenceSummary

NONE = "NONE"
SIX_WAY = "six-way"

_SPAN_RE = re.compile(r"s(\d+):(\d+)-(\d+)$")
_RANK = {k: i for i, k in enumerate(PRECEDENCE)}


@dataclass(frozen=True)
class StandoffAnnotation:
    id: str
    kind: ConceptKind
    sentence: int
    start: int
    end: int
    normalized: str
    attrs: tuple[tuple[str, str], ...] = ()

    @property
    def span_ref(self) -> str:
        return f"s{self.sentence}:{self.start}-{self.end}"

    def attr(self, key: str) -> str | None:
        for k, v in self.attrs:
            if k == key:
                return v
        return None

    def line(self) -> str:
        cols = [self.id, self.kind.value, self.span_ref, self.normalized]
        cols += [f"{k}={v}" for k, v in self.attrs]
        return "\t".join(cols)


@dataclass(frozen=True)
class AnnotationSet:
    annotations: tuple[StandoffAnnotation, ...]
    corpus: str | None = None
    source: str = "<string>"

    def __len__(self) -> int:
        return len(self.annotations)

    def __iter__(self):
        return iter(self.annotations)


def _check_bounds(ann: StandoffAnnotation, lengths: dict[int, int], where: str) -> None:
    size = lengths.get(ann.sentence)
    if size is None:
        raise AnnotationFormatError(
            f"{where}: annotation {ann.id}: sentence s{ann.sentence} not in corpus")
    if ann.end >= size:
        raise AnnotationFormatError(
            f"{where}: annotation {ann.id}: span {ann.span_ref} out of bounds "
            f"(sentence has {size} tokens)")


def _lengths(corpus: Sequence[Review]) -> dict[int, int]:
    return {s.number: len(s) for s in corpus_sentences(corpus)}


def parse_annotations(text: str, corpus: Sequence[Review] | None = None,
                      source: str = "<string>") -> AnnotationSet:
    lengths = _lengths(corpus) if corpus is not None else None
    checksum = None
    seen = set()
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        where = f"{source}:{lineno}"
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            parts = line.split()
            if parts[0] == "#corpus" and len(parts) == 2:
                checksum = parts[1]
            continue
        cols = line.split("\t")
        if len(cols) < 4:
            raise AnnotationFormatError(
                f"{where}: expected 'id<TAB>KIND<TAB>s<n>:<start>-<end><TAB>normalized'")
        ann_id, kind_name, span, normalized = cols[:4]
        if not ann_id:
            raise AnnotationFormatError(f"{where}: empty annotation id")
        if ann_id in seen:
            raise AnnotationFormatError(f"{where}: duplicate annotation id {ann_id}")
        seen.add(ann_id)
        try:
            kind = ConceptKind(kind_name)
        except ValueError:
            raise AnnotationFormatError(
                f"{where}: annotation {ann_id}: unknown kind {kind_name!r}") from None
        m = _SPAN_RE.match(span)
        if not m:
            raise AnnotationFormatError(f"{where}: annotation {ann_id}: bad span {span!r}")
        number, start, end = (int(g) for g in m.groups())
        if number < 1 or start > end:
            raise AnnotationFormatError(f"{where}: annotation {ann_id}: bad span {span!r}")
        attrs = []
        for col in cols[4:]:
            key, sep, value = col.partition("=")
            if not sep or not key:
                raise AnnotationFormatError(
                    f"{where}: annotation {ann_id}: expected key=value, got {col!r}")
            attrs.append((key, value))
        ann = StandoffAnnotation(ann_id, kind, number, start, end, normalized, tuple(attrs))
        if lengths is not None:
            _check_bounds(ann, lengths, where)
        out.append(ann)
    if corpus is not None and checksum is not None and checksum != corpus_checksum(corpus):
        raise AgreementError(f"{source}: annotations were made over a different corpus")
    return AnnotationSet(tuple(out), checksum, source)


def load_annotations(path: str | Path, corpus: Sequence[Review] | None = None) -> AnnotationSet:
    path = Path(path)
    return parse_annotations(path.read_text(encoding="utf-8"), corpus, str(path))


def dump_annotations(aset: AnnotationSet) -> str:
    lines = []
    if aset.corpus:
        lines.append(f"#corpus {aset.corpus}")
    lines.extend(a.line() for a in aset.annotations)
    return "".join(line + "\n" for line in lines)


def summaries_to_annotations(summaries: Sequence[SentenceSummary],
                             corpus: str | None = None) -> AnnotationSet:
    """Engine output as a standoff set with corpus-wide ids (F1, F2, ... A1, ...)."""
    counts: Counter = Counter()
    ids: dict[tuple[int, str], str] = {}
    for s in summaries:
        for a in s.annotations:
            counts[a.kind] += 1
            ids[(s.sentence.number, a.id)] = f"{a.kind.letter}{counts[a.kind]}"
    out = []
    for s in summaries:
        number = s.sentence.number
        for a in s.annotations:
            attrs = tuple((link.role, ids[(number, link.target)]) for link in a.links)
            out.append(StandoffAnnotation(ids[(number, a.id)], a.kind, number,
                                          a.start, a.end, a.normalized, attrs))
    out.sort(key=lambda a: (a.sentence, a.kind.order, a.start, a.end, a.id))
    return AnnotationSet(tuple(out), corpus)


# ---------------------------------------------------------------------------
# rating matrices


@dataclass(frozen=True)
class RatingMatrix:
    counts: np.ndarray
    categories: tuple[str, ...]
    items: tuple = ()

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 2:
            raise AgreementError("rating matrix must be two-dimensional")
        n_items, k = counts.shape
        if n_items < 1:
            raise AgreementError("rating matrix needs at least one item")
        if k < 2 or len(self.categories) != k:
            raise AgreementError("rating matrix needs k >= 2 named categories")
        if (counts < 0).any():
            raise AgreementError("rating counts must be non-negative")
        sums = counts.sum(axis=1)
        if (sums != sums[0]).any():
            raise AgreementError("every item must be rated by the same number of raters")
        if self.items and len(self.items) != n_items:
            raise AgreementError("item labels do not match the number of rows")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def n_items(self) -> int:
        return self.counts.shape[0]

    @property
    def raters(self) -> int:
        return int(self.counts[0].sum())

    @classmethod
    def from_labels(cls, labels, categories: Sequence[str], items: tuple = ()) -> "RatingMatrix":
        """Build from an items x raters array of category indices."""
        labels = np.asarray(labels, dtype=np.int64)
        if labels.ndim != 2:
            raise AgreementError("labels must be an items x raters array")
        k = len(categories)
        if labels.size and (labels.min() < 0 or labels.max() >= k):
            raise AgreementError("label index out of range")
        counts = np.zeros((labels.shape[0], k), dtype=np.int64)
        for j in range(labels.shape[1]):
            np.add.at(counts, (np.arange(labels.shape[0]), labels[:, j]), 1)
        return cls(counts, tuple(categories), items)


def _mode_categories(mode) -> tuple[str, ...]:
    if mode == SIX_WAY:
        return tuple(k.value for k in ConceptKind) + (NONE,)
    kind = ConceptKind(mode)
    return kind.value, f"NOT_{kind.value}"


def _token_labels(aset: AnnotationSet) -> dict[tuple[int, int], ConceptKind]:
    labels: dict[tuple[int, int], ConceptKind] = {}
    for a in aset.annotations:
        for t in range(a.start, a.end + 1):
            key = (a.sentence, t)
            prev = labels.get(key)
            if prev is None or _RANK[a.kind] < _RANK[prev]:
                labels[key] = a.kind
    return labels


def _check_sets(sets: Sequence[AnnotationSet], corpus: Sequence[Review]) -> None:
    if len(sets) < 2:
        raise AgreementError("agreement needs at least two annotation sets")
    checksum = corpus_checksum(corpus)
    for s in sets:
        if s.corpus is not None and s.corpus != checksum:
            raise AgreementError(f"{s.source}: annotations were made over a different corpus")
    lengths = _lengths(corpus)
    for s in sets:
        for a in s.annotations:
            _check_bounds(a, lengths, s.source)


def _labels(sets, corpus, mode) -> tuple[list[tuple[int, int]], tuple[str, ...], np.ndarray]:
    _check_sets(sets, corpus)
    categories = _mode_categories(mode)
    items = [(s.number, t.index) for s in corpus_sentences(corpus) for t in s.tokens]
    if not items:
        raise AgreementError("corpus has no tokens")
    index = {c: j for j, c in enumerate(categories)}
    binary = mode != SIX_WAY
    labels = np.empty((len(items), len(sets)), dtype=np.int64)
    for r, aset in enumerate(sets):
        tokens = _token_labels(aset)
        for i, item in enumerate(items):
            kind = tokens.get(item)
            if binary:
                labels[i, r] = 0 if kind is not None and kind.value == categories[0] else 1
            else:
                labels[i, r] = index[kind.value if kind is not None else NONE]
    return items, categories, labels


def to_rating_matrix(sets: Sequence[AnnotationSet], corpus: Sequence[Review],
                     mode=SIX_WAY) -> RatingMatrix:
    """Tokens x categories count matrix; ``mode`` is ``six-way`` or a concept kind."""
    items, categories, labels = _labels(sets, corpus, mode)
    return RatingMatrix.from_labels(labels, categories, tuple(items))


class Kappa(NamedTuple):
    kappa: float
    pr_a: float
    pr_e: float
    degenerate: bool = False


def fleiss_kappa(m: RatingMatrix) -> Kappa:
    n = m.raters
    if n < 2:
        raise AgreementError(f"kappa needs at least two raters per item, got {n}")
    counts = m.counts.astype(np.float64)
    n_items = counts.shape[0]
    p = counts.sum(axis=0) / (n_items * n)
    per_item = ((counts ** 2).sum(axis=1) - n) / (n * (n - 1))
    pr_a = float(per_item.mean())
    pr_e = float((p ** 2).sum())
    if np.count_nonzero(m.counts.sum(axis=0)) == 1:
        return Kappa(1.0, 1.0, 1.0, True)
    return Kappa((pr_a - pr_e) / (1.0 - pr_e), pr_a, pr_e, False)


class Level(str, enum.Enum):
    POOR = "Poor"
    SLIGHT = "Slight"
    FAIR = "Fair"
    MODERATE = "Moderate"
    SUBSTANTIAL = "Substantial"
    PERFECT = "Perfect"


# Upper bounds, inclusive.
_BANDS = ((0.0, Level.POOR), (0.2, Level.SLIGHT), (0.4, Level.FAIR),
          (0.6, Level.MODERATE), (0.8, Level.SUBSTANTIAL), (1.0, Level.PERFECT))


def interpret(k: float) -> Level:
    if k != k:
        raise AgreementError("kappa is NaN")
    for upper, level in _BANDS:
        if k <= upper:
            return level
    raise AgreementError(f"kappa {k} exceeds 1")


# ---------------------------------------------------------------------------
# reports


@dataclass
class AgreementReport:
    kappa: float
    pr_a: float
    pr_e: float
    level: Level
    per_concept: dict[ConceptKind, tuple[float, Level]]
    raters: int
    items: int
    degenerate: bool = False

    def record(self) -> dict:
        return {
            "kappa": self.kappa, "pr_a": self.pr_a, "pr_e": self.pr_e,
            "level": self.level.value, "degenerate": self.degenerate,
            "raters": self.raters, "items": self.items,
            "per_concept": {k.value: {"kappa": v[0], "level": v[1].value}
                            for k, v in self.per_concept.items()},
        }

    def table(self) -> str:
        rows = [("scope", "kappa", "level")]
        rows.append(("overall", f"{self.kappa:.4f}", self.level.value))
        for kind, (k, level) in self.per_concept.items():
            rows.append((kind.value, f"{k:.4f}", level.value))
        w0 = max(len(r[0]) for r in rows)
        w1 = max(len(r[1]) for r in rows)
        lines = [f"{a.ljust(w0)}  {b.rjust(w1)}  {c}" for a, b, c in rows]
        lines.append(f"pr_a={self.pr_a:.4f} pr_e={self.pr_e:.4f} "
                     f"raters={self.raters} tokens={self.items}")
        return "\n".join(lines) + "\n"


def agreement_report(sets: Sequence[AnnotationSet], corpus: Sequence[Review]) -> AgreementReport:
    overall = fleiss_kappa(to_rating_matrix(sets, corpus, SIX_WAY))
    per_concept = {}
    for kind in ConceptKind:
        res = fleiss_kappa(to_rating_matrix(sets, corpus, kind))
        per_concept[kind] = (res.kappa, interpret(res.kappa))
    n_tokens = sum(len(s) for s in corpus_sentences(corpus))
    return AgreementReport(overall.kappa, overall.pr_a, overall.pr_e, interpret(overall.kappa),
                           per_concept, len(sets), n_tokens, overall.degenerate)


@dataclass(frozen=True)
class Disagreement:
    ref: str
    categories: tuple[str, ...]
    sentence: str


@dataclass
class DisagreementReport:
    entries: list[Disagreement]
    pairs: Counter = field(default_factory=Counter)

    def __len__(self) -> int:
        return len(self.entries)

    def record(self) -> dict:
        return {
            "entries": [{"token": e.ref, "categories": list(e.categories),
                         "sentence": e.sentence} for e in self.entries],
            "pairs": [{"pair": list(p), "count": c} for p, c in sorted(self.pairs.items())],
        }

    def table(self) -> str:
        lines = []
        for e in self.entries:
            lines.append(f"{e.ref}\t{' '.join(e.categories)}\t{e.sentence}")
        for (a, b), c in sorted(self.pairs.items()):
            lines.append(f"{a}/{b}\t{c}")
        return "".join(line + "\n" for line in lines)


def disagreement_report(sets: Sequence[AnnotationSet],
                        corpus: Sequence[Review]) -> DisagreementReport:
    items, categories, labels = _labels(sets, corpus, SIX_WAY)
    texts = {s.number: s.text for s in corpus_sentences(corpus)}
    entries = []
    pairs: Counter = Counter()
    for (number, token), row in zip(items, labels):
        if (row == row[0]).all():
            continue
        cats = tuple(categories[j] for j in row)
        entries.append(Disagreement(f"s{number}:{token}", cats, texts[number]))
        order = {c: j for j, c in enumerate(categories)}
        distinct = sorted(set(cats), key=order.get)
        for i, a in enumerate(distinct):
            for b in distinct[i + 1:]:
                pairs[(a, b)] += 1
    return DisagreementReport(entries, pairs)
