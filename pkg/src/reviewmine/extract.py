"""Pattern matchers for the five design concepts and the per-sentence orchestrator.

All matchers work on one tagged sentence.  Adjacency is a token window in
which articles are not counted.  Annotation spans are inclusive token ranges.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .corpus import (
    ARTICLES,
    DEGREE_ADVERBS,
    DEMONSTRATIVES,
    NEGATIONS,
    POSSESSIVES,
    Pos,
    Review,
    Sentence,
)
from .lexicons import LexiconSet


class ConceptKind(str, enum.Enum):
    FEATURE = "FEATURE"
    AFFORDANCE = "AFFORDANCE"
    EMOTION = "EMOTION"
    PERCEPTION = "PERCEPTION"
    USAGE_CONDITION = "USAGE_CONDITION"

    @property
    def order(self) -> int:
        return _KIND_ORDER[self]

    @property
    def field_name(self) -> str:
        return _FIELD_NAMES[self]

    @property
    def letter(self) -> str:
        return "FAEPU"[self.order]


_KIND_ORDER = {k: i for i, k in enumerate(ConceptKind)}
_FIELD_NAMES = {
    ConceptKind.FEATURE: "features",
    ConceptKind.AFFORDANCE: "affordances",
    ConceptKind.EMOTION: "emotions",
    ConceptKind.PERCEPTION: "perceptions",
    ConceptKind.USAGE_CONDITION: "usage_conditions",
}

# Highest first; used when one token matches several patterns.
PRECEDENCE = (ConceptKind.EMOTION, ConceptKind.PERCEPTION, ConceptKind.AFFORDANCE,
              ConceptKind.FEATURE, ConceptKind.USAGE_CONDITION)

THIRD_PERSON = frozenset({"it", "they", "them", "itself", "themselves"})
OBJECT_PRONOUNS = frozenset({"it", "them", "me", "him", "her", "us", "you"})
COORDINATORS = frozenset({"and", "or", "nor"})
QUANTITY_NOUNS = frozenset({"amount", "number", "lot", "deal", "bit", "couple", "plenty"})
PARTICLES = frozenset({"up", "down", "out", "off", "away", "back", "over"})
COPULA = "be"
DEFAULT_ANTECEDENT = "product"
MIN_STEM = 3

# Stem endings repaired after an affordance suffix is removed.
STEM_REPAIRS = (("iz", "ize"), ("us", "use"), ("ur", "ure"), ("v", "ve"), ("i", "y"))

_NOMINAL = (Pos.NOUN, Pos.PROPN, Pos.NUM)


@dataclass(frozen=True)
class Link:
    role: str
    target: str
    anchor: str = ""


@dataclass(frozen=True)
class ConceptAnnotation:
    id: str
    kind: ConceptKind
    start: int
    end: int
    trigger: int
    normalized: str
    text: str = ""
    links: tuple[Link, ...] = ()
    resolved_from: int | None = None
    meta: dict = field(default_factory=dict, compare=True)

    @property
    def span(self) -> tuple[int, int]:
        return self.start, self.end

    def target(self, role: str = "target") -> str | None:
        for link in self.links:
            if link.role == role:
                return link.target
        return None


@dataclass(frozen=True)
class SentenceSummary:
    sentence: Sentence
    annotations: tuple[ConceptAnnotation, ...] = ()

    def of_kind(self, kind: ConceptKind) -> list[ConceptAnnotation]:
        return [a for a in self.annotations if a.kind is kind]

    @property
    def features(self):
        return self.of_kind(ConceptKind.FEATURE)

    @property
    def affordances(self):
        return self.of_kind(ConceptKind.AFFORDANCE)

    @property
    def emotions(self):
        return self.of_kind(ConceptKind.EMOTION)

    @property
    def perceptions(self):
        return self.of_kind(ConceptKind.PERCEPTION)

    @property
    def usage_conditions(self):
        return self.of_kind(ConceptKind.USAGE_CONDITION)

    def grouped(self) -> dict[ConceptKind, list[ConceptAnnotation]]:
        return {k: self.of_kind(k) for k in ConceptKind}

    def by_id(self, ann_id: str) -> ConceptAnnotation | None:
        for a in self.annotations:
            if a.id == ann_id:
                return a
        return None


@dataclass(frozen=True)
class ExtractConfig:
    window: int = 3
    min_freq: int = 3
    noun_freq: Mapping[str, int] = field(default_factory=dict)
    verb_lemmas: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.min_freq < 1:
            raise ValueError("min_freq must be >= 1")

    @classmethod
    def from_corpus(cls, sentences: Iterable[Sentence], window: int = 3,
                    min_freq: int = 3) -> "ExtractConfig":
        nouns: Counter = Counter()
        verbs = set()
        for s in sentences:
            for t in s.tokens:
                if t.pos in (Pos.NOUN, Pos.PROPN):
                    nouns[t.lemma] += 1
                elif t.pos is Pos.VERB:
                    verbs.add(t.lemma)
        return cls(window, min_freq, dict(sorted(nouns.items())), frozenset(verbs))


# ---------------------------------------------------------------------------
# sentence helpers


class _View:
    def __init__(self, sentence: Sentence):
        self.sentence = sentence
        self.toks = sentence.tokens
        self.n = len(self.toks)
        cum = [0]
        for t in self.toks:
            cum.append(cum[-1] + (0 if t.is_article else 1))
        self._cum = cum

    def pos(self, i: int) -> Pos | None:
        return self.toks[i].pos if 0 <= i < self.n else None

    def lemma(self, i: int) -> str:
        return self.toks[i].lemma if 0 <= i < self.n else ""

    def dist(self, i: int, j: int) -> int:
        lo, hi = (i, j) if i <= j else (j, i)
        return self._cum[hi + 1] - self._cum[lo + 1]

    def span_dist(self, i: int, start: int, end: int) -> int:
        if start <= i <= end:
            return 0
        return self.dist(i, start) if i < start else self.dist(end, i)

    def is_break(self, i: int) -> bool:
        return not any(c.isalnum() for c in self.toks[i].surface)

    def phrase(self, start: int, end: int, skip=ARTICLES, split_digits=True) -> str:
        words = []
        for t in self.toks[start:end + 1]:
            if t.lemma in skip:
                continue
            words.append(_split_digits(t.surface) if split_digits else t.surface)
        return " ".join(words)


def _split_digits(surface: str) -> str:
    return re.sub(r"(?<=\d)(?=[^\W\d_])", " ", surface)


def _np_forward(v: _View, i: int, of_ext: bool = True) -> tuple[int, int] | None:
    """Noun phrase beginning at ``i``: determiners, modifiers, nominal head."""
    k = i
    while k < v.n and (v.pos(k) is Pos.DET or
                       (v.pos(k) is Pos.PRON and v.lemma(k) in POSSESSIVES)):
        k += 1
    start = k
    while k < v.n and (v.pos(k) in (Pos.ADJ, *_NOMINAL) or
                       (v.pos(k) is Pos.ADV and v.lemma(k) in DEGREE_ADVERBS)):
        k += 1
    end = k - 1
    while end >= start and v.pos(end) not in _NOMINAL:
        end -= 1
    if end < start:
        return None
    # leading articles are never part of a span
    first = i
    while first < start and v.toks[first].is_article:
        first += 1
    if of_ext and v.lemma(end + 1) == "of":
        tail = _np_forward(v, end + 2, of_ext=True)
        if tail is not None:
            end = tail[1]
    return first, end


def _np_backward(v: _View, end: int) -> int | None:
    """Start of the noun phrase ending at ``end`` (modifiers and of-complements)."""
    if v.pos(end) not in (Pos.NOUN, Pos.PROPN):
        return None
    k = end
    while k - 1 >= 0:
        p, lem = v.pos(k - 1), v.lemma(k - 1)
        if p in (Pos.ADJ, *_NOMINAL) or (p is Pos.DET and (lem in ARTICLES or lem in DEMONSTRATIVES)):
            k -= 1
        elif lem == "of" and v.pos(k - 2) in (Pos.NOUN, Pos.PROPN):
            k -= 1
        else:
            break
    while v.toks[k].is_article:
        k += 1
    return k


def _name_tokens(v: _View, lexicons: LexiconSet) -> set[int]:
    """Token indices belonging to proper names or multiword product terms."""
    out: set[int] = set()
    for start, end in _term_matches(v, lexicons):
        out.update(range(start, end + 1))
    for i, t in enumerate(v.toks):
        if t.pos is Pos.PROPN:
            out.add(i)
        elif (t.pos is Pos.ADJ and t.surface[:1].isupper()
              and Pos.PROPN in (v.pos(i - 1), v.pos(i + 1))):
            out.add(i)
    return out


def _term_matches(v: _View, lexicons: LexiconSet) -> list[tuple[int, int]]:
    matches = []
    i = 0
    while i < v.n:
        for term in lexicons.multiword_terms:
            j = i + len(term)
            if j <= v.n and all(v.toks[i + k].lemma == w or v.toks[i + k].surface.lower() == w
                                for k, w in enumerate(term)):
                matches.append((i, j - 1))
                i = j
                break
        else:
            i += 1
    return matches


# ---------------------------------------------------------------------------
# product features


def _chunks(v: _View, lexicons: LexiconSet) -> list[tuple[int, int, int, bool]]:
    """Nominal chunks as (start, end, head, is_named_term)."""
    spans: list[list] = [[s, e, True] for s, e in _term_matches(v, lexicons)]
    i = 0
    while i < v.n:
        if v.pos(i) in _NOMINAL:
            j = i
            while j + 1 < v.n and v.pos(j + 1) in _NOMINAL:
                j += 1
            spans.append([i, j, False])
            i = j + 1
        else:
            i += 1
    spans.sort()
    merged: list[list] = []
    for s in spans:
        if merged and s[0] <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], s[1])
            merged[-1][2] = merged[-1][2] or s[2]
        else:
            merged.append(list(s))
    out = []
    for start, end, named in merged:
        heads = [k for k in range(start, end + 1) if v.pos(k) in (Pos.NOUN, Pos.PROPN)]
        if not heads and not named:
            continue
        head = heads[-1] if heads else end
        if start > 0 and v.pos(start - 1) is Pos.DET and v.lemma(start - 1) in DEMONSTRATIVES:
            start -= 1
        out.append((start, end, head, named))
    return out


def _feature(v: _View, start: int, end: int, trigger: int, **extra) -> ConceptAnnotation:
    return ConceptAnnotation(
        id=f"F{start}-{end}", kind=ConceptKind.FEATURE, start=start, end=end,
        trigger=trigger, normalized=extra.pop("normalized", None) or v.phrase(start, end),
        text=v.phrase(start, end, split_digits=False), **extra)


def _component_features(v: _View, lexicons: LexiconSet, noun_freq: Mapping[str, int],
                        min_freq: int) -> list[ConceptAnnotation]:
    out = []
    for start, end, head, named in _chunks(v, lexicons):
        lemma = v.lemma(head)
        if named or lemma in lexicons.product_terms or noun_freq.get(lemma, 0) >= min_freq:
            out.append(_feature(v, start, end, head))
    return out


def _attached_features(v: _View, lexicons: LexiconSet,
                       components: Sequence[ConceptAnnotation]) -> list[ConceptAnnotation]:
    """Things located at a product component: ``<noun phrase> <place prep> <component>``."""
    heads = {f.trigger for f in components}
    out = []
    for p in range(1, v.n):
        if v.pos(p) is not Pos.PREP or v.lemma(p) not in lexicons.place_prepositions:
            continue
        obj = _np_forward(v, p + 1, of_ext=False)
        if obj is None or obj[1] not in heads:
            continue
        end = p - 1
        while True:
            start = _np_backward(v, end)
            if start is None:
                break
            out.append(_feature(v, start, end, end, meta={"attached_to": v.phrase(*obj)}))
            k = start - 1
            if k < 1 or v.lemma(k) not in COORDINATORS:
                break
            end = k - 1
    return out


def _pronoun_relevant(v: _View, i: int) -> bool:
    j = i - 1
    while j >= 0 and v.pos(j) is Pos.ADV:
        j -= 1
    if j >= 0 and v.pos(j) is Pos.VERB:
        return True
    for k in range(i + 1, v.n):
        if v.is_break(k):
            break
        p = v.pos(k)
        if p in (Pos.NOUN, Pos.PROPN, Pos.NUM, Pos.ADJ, Pos.VERB):
            return True
        if p is Pos.LINKV and v.lemma(k) != COPULA:
            return True
    return False


def resolve_pronouns(sentence: Sentence, context: SentenceSummary | None,
                     lexicons: LexiconSet,
                     features: Sequence[ConceptAnnotation] | None = None) -> dict[int, str]:
    """Map each third-person pronoun to the most recent feature before it.

    The search runs backward through ``features`` of the current sentence
    (product-term chunks when not given), then through the previous
    sentence's summary, and falls back to ``"product"``.
    """
    v = _View(sentence)
    if features is None:
        features = _component_features(v, lexicons, {}, 1 << 30)
    previous = sorted(context.features, key=lambda f: (f.end, f.start)) if context else []
    out = {}
    for i, t in enumerate(sentence.tokens):
        if t.pos is not Pos.PRON or t.lemma not in THIRD_PERSON:
            continue
        before = [f for f in features if f.end < i and f.resolved_from is None]
        if before:
            out[i] = max(before, key=lambda f: (f.end, f.start)).normalized
        elif previous:
            out[i] = previous[-1].normalized
        else:
            out[i] = DEFAULT_ANTECEDENT
    return out


def extract_features(sentence: Sentence, lexicons: LexiconSet,
                     noun_freq: Mapping[str, int], min_freq: int,
                     pronouns: Mapping[int, str] | None = None,
                     window: int = 3) -> list[ConceptAnnotation]:
    v = _View(sentence)
    components = _component_features(v, lexicons, noun_freq, min_freq)
    attached = _attached_features(v, lexicons, components)
    features = [f for f in components
                if not any(a.start <= f.start and f.end <= a.end for a in attached)]
    features += attached
    for i, antecedent in sorted((pronouns or {}).items()):
        if _pronoun_relevant(v, i):
            features.append(_feature(v, i, i, i, normalized=antecedent, resolved_from=i))
    anchors = [f for f in features]
    for i, t in enumerate(sentence.tokens):
        if t.pos is not Pos.LINKV or t.lemma == COPULA:
            continue
        if any(f.end < i and v.dist(f.end, i) <= window for f in anchors):
            features.append(ConceptAnnotation(
                id=f"F{i}-{i}", kind=ConceptKind.FEATURE, start=i, end=i, trigger=i,
                normalized=t.lemma, text=t.surface, meta={"linking_verb": True}))
    return _unique(features)


def _unique(anns: Iterable[ConceptAnnotation]) -> list[ConceptAnnotation]:
    seen = {}
    for a in anns:
        seen.setdefault(a.id, a)
    return sorted(seen.values(), key=lambda a: (a.start, a.end, a.id))


# ---------------------------------------------------------------------------
# affordances


def _repair_stem(stem: str) -> str:
    for ending, repl in STEM_REPAIRS:
        if stem.endswith(ending):
            return stem[: -len(ending)] + repl
    if len(stem) > 2 and stem.endswith("at") and stem[-3] not in "aeiou":
        return stem + "e"
    return stem


def derive_action(word: str, suffixes: Sequence[tuple[str, str]],
                  verb_lemmas: frozenset[str] | None = None) -> str | None:
    """Verb stem of a suffix-derived noun or adjective, or None.

    Only the longest matching suffix is tried.  Rule ``verb`` suffixes need the
    repaired stem to be a verb seen in the corpus.
    """
    low = word.lower()
    for suffix, rule in sorted(suffixes, key=lambda s: -len(s[0])):
        if not low.endswith(suffix):
            continue
        stem = low[: -len(suffix)].rstrip("-")
        if not stem.isalpha():
            return None
        stem = _repair_stem(stem)
        if len(stem) < MIN_STEM:
            return None
        if rule == "verb" and stem not in (verb_lemmas or ()):
            return None
        return stem
    return None


def normalize_affordance(action: str, receiver: str | None = None,
                         suffixes: Sequence[tuple[str, str]] = ()) -> str:
    """``ability to <action>[ <receiver>]``; suffixed actions are de-suffixed first."""
    action = " ".join(action.split())
    if not action:
        raise ValueError("affordance action must be non-empty")
    if suffixes:
        action = derive_action(action, [s for s in suffixes if s[1] == "strip"]) or action
    out = f"ability to {action}"
    if receiver and receiver.strip():
        out += " " + " ".join(receiver.split())
    return out


def _receiver(v: _View, i: int) -> tuple[tuple[int, int] | None, int | None]:
    """Object slot of the verb at ``i`` and the position of a phrasal particle."""
    k = i + 1
    particle = None
    while k < v.n and v.pos(k) is Pos.ADV:
        k += 1
    if k < v.n and v.lemma(k) in PARTICLES and _np_forward(v, k + 1) is not None:
        particle = k
        k += 1
    if k >= v.n:
        return None, particle
    if v.pos(k) is Pos.PRON and v.lemma(k) in OBJECT_PRONOUNS:
        span = (k, k)
    elif v.pos(k) in (Pos.DET, Pos.PRON, Pos.ADJ, *_NOMINAL):
        span = _np_forward(v, k)
    else:
        span = None
    if span is not None and particle is None:
        nxt = span[1] + 1
        if (v.lemma(nxt) in PARTICLES and v.pos(nxt) is Pos.PREP
                and _np_forward(v, nxt + 1) is None):
            particle = nxt
    return span, particle


def extract_affordances(sentence: Sentence, lexicons: LexiconSet,
                        verb_lemmas: frozenset[str] | None = None) -> list[ConceptAnnotation]:
    v = _View(sentence)
    blacklist = lexicons.affordance_blacklist()
    out = []
    for i, t in enumerate(sentence.tokens):
        meta: dict = {}
        span = None
        particle = None
        if t.pos is Pos.VERB:
            action = t.lemma
            if action in blacklist or action in lexicons.emotion_words:
                continue
            span, particle = _receiver(v, i)
        elif t.pos in (Pos.NOUN, Pos.ADJ):
            if t.lemma in lexicons.action_nouns:
                action = lexicons.action_nouns[t.lemma]
                meta["noun_as_action"] = True
            else:
                action = derive_action(t.lemma, lexicons.affordance_suffixes, verb_lemmas)
                if action is None:
                    continue
                meta["derived_from"] = t.surface
            if action in blacklist:
                continue
        else:
            continue
        meta["action"] = action
        phrase_action = action
        if particle is not None:
            phrase_action = f"{action} {v.lemma(particle)}"
            meta["particle"] = v.lemma(particle)
        receiver = None
        end = i
        if span is not None:
            receiver = v.phrase(*span, skip=ARTICLES | POSSESSIVES)
            meta["receiver_span"] = list(span)
            end = span[1]
        if particle is not None:
            end = max(end, particle)
        out.append(ConceptAnnotation(
            id=f"A{i}", kind=ConceptKind.AFFORDANCE, start=i, end=end, trigger=i,
            normalized=normalize_affordance(phrase_action, receiver),
            text=v.phrase(i, end, split_digits=False), meta=meta))
    return out


def _is_verbal(sentence: Sentence, a: ConceptAnnotation) -> bool:
    return sentence.tokens[a.trigger].pos is Pos.VERB


# ---------------------------------------------------------------------------
# emotions


def extract_emotions(sentence: Sentence, lexicons: LexiconSet,
                     window: int = 3) -> list[ConceptAnnotation]:
    v = _View(sentence)
    humans = [k for k, t in enumerate(sentence.tokens)
              if t.lemma in lexicons.human_refs or t.surface.lower() in lexicons.human_refs]
    out = []
    for i, t in enumerate(sentence.tokens):
        entry = lexicons.emotion_words.get(t.lemma)
        if entry is None or t.pos not in (Pos.ADJ, Pos.VERB, Pos.NOUN):
            continue
        if any(k != i and v.dist(i, k) <= window for k in humans):
            out.append(ConceptAnnotation(
                id=f"E{i}", kind=ConceptKind.EMOTION, start=i, end=i, trigger=i,
                normalized=t.lemma, text=t.surface,
                meta={"category": entry.category, "polarity": entry.polarity}))
    return out


# ---------------------------------------------------------------------------
# perceptions


def _anchor(v: _View, target: ConceptAnnotation, avoid: tuple[int, int], near: int) -> str:
    if target.kind is ConceptKind.AFFORDANCE:
        return target.meta.get("action", v.lemma(target.trigger))
    if target.resolved_from is not None or target.meta.get("linking_verb"):
        return target.text
    cands = [k for k in range(target.start, target.end + 1)
             if not avoid[0] <= k <= avoid[1] and v.pos(k) in _NOMINAL]
    if not cands:
        return target.normalized
    k = min(cands, key=lambda k: (abs(k - near), k))
    return _split_digits(v.toks[k].surface)


def _perception(v: _View, trigger: int, start: int, end: int, target: ConceptAnnotation,
                normalized: str | None = None) -> ConceptAnnotation:
    return ConceptAnnotation(
        id=f"P{trigger}>{target.id}", kind=ConceptKind.PERCEPTION, start=start, end=end,
        trigger=trigger, normalized=normalized or v.phrase(start, end, split_digits=False),
        text=v.phrase(start, end, split_digits=False),
        links=(Link("target", target.id, _anchor(v, target, (start, end), trigger)),))


def _degree_span(v: _View, i: int) -> tuple[int, int]:
    start = i
    while start - 1 >= 0 and v.pos(start - 1) is Pos.ADV and v.lemma(start - 1) in DEGREE_ADVERBS:
        start -= 1
    end = i
    if v.pos(i) is Pos.ADJ and v.lemma(i + 1) in QUANTITY_NOUNS:
        end = i + 1
    return start, end


def extract_perceptions(sentence: Sentence, features: Sequence[ConceptAnnotation],
                        affordances: Sequence[ConceptAnnotation], lexicons: LexiconSet,
                        window: int = 3, exclude: Iterable[int] = ()) -> list[ConceptAnnotation]:
    v = _View(sentence)
    exclude = set(exclude)
    names = _name_tokens(v, lexicons)
    verbal = [a for a in affordances if _is_verbal(sentence, a)]
    nominal = list(features) + [a for a in affordances if not _is_verbal(sentence, a)]
    out = []
    for i, t in enumerate(sentence.tokens):
        if i in exclude:
            continue
        if t.pos is Pos.ADJ and lexicons.has_antonym(t.lemma) and i not in names:
            cands = [(v.span_dist(i, c.start, c.end), 0 if c.start >= i else 1, c.start, c)
                     for c in nominal if c.trigger != i]
            cands = [c for c in cands if c[0] <= window]
            if cands:
                target = min(cands, key=lambda c: c[:3])[3]
                out.append(_perception(v, i, *_degree_span(v, i), target))
        elif (t.pos is Pos.ADV and lexicons.has_antonym(t.lemma)
              and t.lemma not in DEGREE_ADVERBS):
            cands = [(v.dist(i, a.trigger), a.trigger, a) for a in verbal if a.trigger != i]
            cands = [c for c in cands if c[0] <= window]
            if cands:
                target = min(cands, key=lambda c: c[:2])[2]
                out.append(_perception(v, i, *_degree_span(v, i), target))
        elif t.pos is Pos.NEG or t.lemma in NEGATIONS:
            for target in _negation_scope(v, i, features, verbal, window):
                out.append(_perception(v, i, i, i, target, normalized="not"))
    return out


def _negation_scope(v: _View, i: int, features, verbal, window) -> list[ConceptAnnotation]:
    """The first concept after a negation, plus verbs coordinated with it."""
    cands = [(v.dist(i, f.start), f.start, f) for f in features if f.start > i]
    cands += [(v.dist(i, a.trigger), a.trigger, a) for a in verbal if a.trigger > i]
    cands = [c for c in cands if c[0] <= window]
    if not cands:
        return []
    first = min(cands, key=lambda c: c[:2])[2]
    scope = [first]
    if first.kind is ConceptKind.AFFORDANCE:
        by_trigger = {a.trigger: a for a in verbal}
        cur = first
        while True:
            k = cur.end + 1
            if v.lemma(k) not in COORDINATORS:
                break
            k += 1
            while k < v.n and v.pos(k) is Pos.ADV:
                k += 1
            if k not in by_trigger:
                break
            cur = by_trigger[k]
            scope.append(cur)
    return scope


# ---------------------------------------------------------------------------
# usage conditions


def extract_usage_conditions(sentence: Sentence, affordances: Sequence[ConceptAnnotation],
                             lexicons: LexiconSet, window: int = 3) -> list[ConceptAnnotation]:
    v = _View(sentence)
    out = []
    p = 0
    while p < v.n:
        if v.pos(p) is not Pos.PREP or v.lemma(p) not in lexicons.place_prepositions:
            p += 1
            continue
        end = p
        while True:
            obj = _np_forward(v, end + 1)
            if obj is not None:
                end = obj[1]
            if (end + 1 < v.n and v.pos(end + 1) is Pos.PREP
                    and v.lemma(end + 1) in lexicons.place_prepositions):
                end += 1
                continue
            break
        cands = [(v.dist(p, a.trigger), a.trigger, a) for a in affordances
                 if not a.start <= p <= a.end]
        cands = [c for c in cands if c[0] <= window]
        if cands:
            target = min(cands, key=lambda c: c[:2])[2]
            out.append(ConceptAnnotation(
                id=f"U{p}-{end}", kind=ConceptKind.USAGE_CONDITION, start=p, end=end,
                trigger=p, normalized=v.phrase(p, end, split_digits=False),
                text=v.phrase(p, end, split_digits=False),
                links=(Link("modifies", target.id, target.meta.get("action", "")),)))
        p = end + 1
    return out


# ---------------------------------------------------------------------------
# orchestration


def _triggers(anns: Iterable[ConceptAnnotation]) -> set[int]:
    return {a.trigger for a in anns}


def _link_receivers(affordances, features) -> list[ConceptAnnotation]:
    out = []
    for a in affordances:
        span = a.meta.get("receiver_span")
        if span:
            inside = [f for f in features if span[0] <= f.start and f.end <= span[1]]
            if inside:
                f = min(inside, key=lambda f: (f.start, f.end))
                a = replace(a, links=a.links + (Link("receiver", f.id, f.text),))
        out.append(a)
    return out


def _renumber(anns: Sequence[ConceptAnnotation]) -> tuple[ConceptAnnotation, ...]:
    ordered = sorted(anns, key=lambda a: (a.kind.order, a.start, a.end, a.normalized, a.id))
    counts: Counter = Counter()
    mapping = {}
    for a in ordered:
        counts[a.kind] += 1
        mapping[a.id] = f"{a.kind.letter}{counts[a.kind]}"
    out = []
    for a in ordered:
        links = tuple(replace(l, target=mapping[l.target]) for l in a.links)
        out.append(replace(a, id=mapping[a.id], links=links))
    return tuple(out)


def summarize_sentence(sentence: Sentence, context: SentenceSummary | None,
                       lexicons: LexiconSet, config: ExtractConfig) -> SentenceSummary:
    if not sentence.tokens:
        return SentenceSummary(sentence)
    w = config.window
    v = _View(sentence)
    base = _component_features(v, lexicons, config.noun_freq, config.min_freq)
    pronouns = resolve_pronouns(sentence, context, lexicons, features=base)
    features = extract_features(sentence, lexicons, config.noun_freq, config.min_freq,
                                pronouns, w)
    affordances = extract_affordances(sentence, lexicons, config.verb_lemmas)
    emotions = extract_emotions(sentence, lexicons, w)

    claimed = _triggers(emotions)
    affordances = [a for a in affordances if a.trigger not in claimed]
    claimed |= _triggers(affordances)
    features = [f for f in features if f.trigger not in claimed]

    perceptions = extract_perceptions(sentence, features, affordances, lexicons, w,
                                      exclude=_triggers(emotions))
    taken = _triggers(perceptions)
    affordances = [a for a in affordances if a.trigger not in taken]
    features = [f for f in features if f.trigger not in taken]
    alive = {a.id for a in affordances} | {f.id for f in features}
    perceptions = [p for p in perceptions if p.target() in alive]

    usage = extract_usage_conditions(sentence, affordances, lexicons, w)
    affordances = _link_receivers(affordances, features)
    annotations = _renumber([*features, *affordances, *emotions, *perceptions, *usage])
    return SentenceSummary(sentence, annotations)


def summarize_review(review: Review, lexicons: LexiconSet,
                     config: ExtractConfig) -> list[SentenceSummary]:
    out = []
    context = None
    for sentence in review.sentences:
        context = summarize_sentence(sentence, context, lexicons, config)
        out.append(context)
    return out


def summarize_corpus(reviews: Sequence[Review], lexicons: LexiconSet,
                     config: ExtractConfig | None = None, window: int = 3,
                     min_freq: int = 3) -> list[SentenceSummary]:
    if config is None:
        config = ExtractConfig.from_corpus(
            (s for r in reviews for s in r.sentences), window, min_freq)
    out = []
    for review in reviews:
        out.extend(summarize_review(review, lexicons, config))
    return out


# ---------------------------------------------------------------------------
# records


def annotation_record(a: ConceptAnnotation) -> dict:
    rec = {"id": a.id, "normalized": a.normalized, "text": a.text,
           "span": [a.start, a.end], "trigger": a.trigger,
           "links": [{"role": l.role, "target": l.target, "anchor": l.anchor} for l in a.links]}
    if a.resolved_from is not None:
        rec["resolved_from"] = a.resolved_from
    meta = {k: val for k, val in a.meta.items() if k != "receiver_span"}
    if meta:
        rec["meta"] = dict(sorted(meta.items()))
    return rec


def summary_record(summary: SentenceSummary) -> dict:
    s = summary.sentence
    rec = {"ref": s.ref, "review_id": s.review_id, "sentence": s.index, "text": s.text}
    for kind in ConceptKind:
        rec[kind.field_name] = [annotation_record(a) for a in summary.of_kind(kind)]
    return rec


def gold_items(summary: SentenceSummary) -> list[tuple[str, str, str]]:
    """(kind, normalized, target anchor) triples in the order a summary lists them."""
    out = []
    for a in summary.annotations:
        anchor = ""
        for link in a.links:
            if link.role in ("target", "modifies"):
                anchor = link.anchor
        out.append((a.kind.value, a.normalized, anchor))
    return out
