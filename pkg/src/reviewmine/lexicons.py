"""Closed word lists that parameterize every extraction pattern.

A lexicon directory holds one UTF-8 file per list, one entry per line, with
``#`` comment lines.  ``antonyms.txt`` lines are ``lemma<TAB>lemma``,
``emotion.txt`` lines are ``lemma<TAB>category<TAB>polarity`` and
``affordance_suffixes.txt`` lines are ``suffix<TAB>rule``.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import LexiconError

log = logging.getLogger(__name__)

SEED_DIR = Path(__file__).parent / "data" / "lexicons"

MANDATORY = ("emotion", "place_prepositions", "antonyms")
OPTIONAL = (
    "stative_verbs",
    "emotional_verbs",
    "linking_verbs",
    "non_product_actions",
    "human_refs",
    "product_terms",
    "action_nouns",
    "affordance_suffixes",
)
FILES = MANDATORY + OPTIONAL

SUFFIX_RULES = ("strip", "verb")
DEFAULT_SUFFIXES = (
    ("abilities", "strip"),
    ("ibilities", "strip"),
    ("ability", "strip"),
    ("ibility", "strip"),
    ("able", "strip"),
    ("ible", "strip"),
    ("ities", "verb"),
    ("ity", "verb"),
)

# Pairs of lists that may not share a lemma.
EXCLUSIVE = (
    ("stative_verbs", "linking_verbs"),
    ("emotional_verbs", "linking_verbs"),
    ("non_product_actions", "linking_verbs"),
    ("non_product_actions", "stative_verbs"),
    ("non_product_actions", "emotional_verbs"),
)


@dataclass(frozen=True)
class EmotionEntry:
    category: str
    polarity: str


@dataclass(frozen=True)
class LexiconSet:
    emotion_words: dict[str, EmotionEntry] = field(default_factory=dict)
    stative_verbs: frozenset[str] = frozenset()
    emotional_verbs: frozenset[str] = frozenset()
    linking_verbs: frozenset[str] = frozenset()
    non_product_actions: frozenset[str] = frozenset()
    place_prepositions: frozenset[str] = frozenset()
    antonym_pairs: frozenset[frozenset[str]] = frozenset()
    human_refs: frozenset[str] = frozenset()
    product_terms: frozenset[str] = frozenset()
    action_nouns: dict[str, str] = field(default_factory=dict)
    affordance_suffixes: tuple[tuple[str, str], ...] = DEFAULT_SUFFIXES

    def __post_init__(self):
        words = set()
        for pair in self.antonym_pairs:
            words.update(pair)
        object.__setattr__(self, "_antonym_words", frozenset(words))
        multi = sorted(
            (tuple(t.split()) for t in self.product_terms if " " in t),
            key=lambda t: (-len(t), t),
        )
        object.__setattr__(self, "_multiword_terms", tuple(multi))

    @property
    def antonym_words(self) -> frozenset[str]:
        return self._antonym_words

    @property
    def multiword_terms(self) -> tuple[tuple[str, ...], ...]:
        """Multiword product terms as lemma tuples, longest first."""
        return self._multiword_terms

    def has_antonym(self, lemma: str) -> bool:
        return lemma.lower() in self._antonym_words

    def is_place_preposition(self, lemma: str) -> bool:
        return lemma.lower() in self.place_prepositions

    def affordance_blacklist(self) -> frozenset[str]:
        return (
            self.stative_verbs
            | self.emotional_verbs
            | self.linking_verbs
            | self.non_product_actions
        )


_KINDS = {
    "emotion": "emotion_words",
    "emotion_words": "emotion_words",
    "stative": "stative_verbs",
    "stative_verbs": "stative_verbs",
    "emotional_verb": "emotional_verbs",
    "emotional_verbs": "emotional_verbs",
    "linking": "linking_verbs",
    "linking_verbs": "linking_verbs",
    "non_product_action": "non_product_actions",
    "non_product_actions": "non_product_actions",
    "place_preposition": "place_prepositions",
    "place_prepositions": "place_prepositions",
    "antonym": "antonym",
    "antonyms": "antonym",
    "antonym_pairs": "antonym",
    "human_ref": "human_refs",
    "human_refs": "human_refs",
    "product_term": "product_terms",
    "product_terms": "product_terms",
    "action_noun": "action_nouns",
    "action_nouns": "action_nouns",
}


def lookup(lexicons: LexiconSet, kind: str, lemma: str) -> bool:
    """Case-insensitive membership test against one named list.

    For ``antonym`` the answer is whether the lemma takes part in at least
    one antonym pair.
    """
    try:
        attr = _KINDS[kind]
    except KeyError:
        raise LexiconError(f"unknown lexicon kind {kind!r}") from None
    key = lemma.lower()
    if attr == "antonym":
        return key in lexicons.antonym_words
    return key in getattr(lexicons, attr)


def _lines(path: Path) -> Iterator[tuple[int, list[str]]]:
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, [part.strip() for part in line.split("\t")]


def _read_words(path: Path) -> frozenset[str]:
    return frozenset(" ".join(parts[0].lower().split()) for _, parts in _lines(path))


def _read_pairs(path: Path) -> frozenset[frozenset[str]]:
    pairs = set()
    for lineno, parts in _lines(path):
        if len(parts) != 2 or not all(parts):
            raise LexiconError(f"{path}:{lineno}: expected 'lemma<TAB>lemma'")
        a, b = parts[0].lower(), parts[1].lower()
        if a == b:
            raise LexiconError(f"{path}:{lineno}: {a!r} cannot be its own antonym")
        pairs.add(frozenset((a, b)))
    return frozenset(pairs)


def _read_emotions(path: Path) -> dict[str, EmotionEntry]:
    out: dict[str, EmotionEntry] = {}
    for lineno, parts in _lines(path):
        if len(parts) != 3 or parts[2] not in ("+", "-"):
            raise LexiconError(
                f"{path}:{lineno}: expected 'lemma<TAB>category<TAB>polarity(+|-)'"
            )
        lemma = parts[0].lower()
        entry = EmotionEntry(parts[1].lower(), parts[2])
        if lemma in out and out[lemma] != entry:
            raise LexiconError(
                f"conflicting entries for {lemma!r}: emotion and emotion "
                f"({out[lemma].category}{out[lemma].polarity} vs "
                f"{entry.category}{entry.polarity})"
            )
        out[lemma] = entry
    return out


def _read_action_nouns(path: Path) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, parts in _lines(path):
        if len(parts) > 2:
            raise LexiconError(f"{path}:{lineno}: expected 'noun[<TAB>verb]'")
        noun = parts[0].lower()
        verb = parts[1].lower() if len(parts) == 2 and parts[1] else noun
        if noun in out and out[noun] != verb:
            raise LexiconError(
                f"conflicting entries for {noun!r}: action_nouns and action_nouns"
            )
        out[noun] = verb
    return out


def _read_suffixes(path: Path) -> tuple[tuple[str, str], ...]:
    out = []
    for lineno, parts in _lines(path):
        suffix = parts[0].lower().lstrip("-")
        rule = parts[1].lower() if len(parts) > 1 else "strip"
        if rule not in SUFFIX_RULES:
            raise LexiconError(f"{path}:{lineno}: unknown suffix rule {rule!r}")
        out.append((suffix, rule))
    return tuple(out)


_READERS = {
    "emotion": _read_emotions,
    "antonyms": _read_pairs,
    "action_nouns": _read_action_nouns,
    "affordance_suffixes": _read_suffixes,
}

_FIELD_FOR_FILE = {
    "emotion": "emotion_words",
    "antonyms": "antonym_pairs",
}


def _check_disjoint(values: dict[str, Iterable[str]]) -> None:
    for a, b in EXCLUSIVE:
        both = sorted(set(values.get(a, ())) & set(values.get(b, ())))
        if both:
            raise LexiconError(f"conflicting entries for {both[0]!r}: {a} and {b}")


def load_lexicons(directory: str | Path) -> LexiconSet:
    directory = Path(directory)
    if not directory.is_dir():
        raise LexiconError(f"lexicon directory not found: {directory}")
    values: dict = {}
    for name in FILES:
        path = directory / f"{name}.txt"
        if not path.is_file():
            if name in MANDATORY:
                raise LexiconError(f"missing mandatory lexicon file: {path}")
            log.warning("lexicon file %s missing; using %s", path,
                        "defaults" if name == "affordance_suffixes" else "an empty list")
            continue
        values[name] = _READERS.get(name, _read_words)(path)
    _check_disjoint(values)
    return LexiconSet(**{_FIELD_FOR_FILE.get(k, k): v for k, v in values.items()})


def save_lexicons(lexicons: LexiconSet, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    def write(name: str, rows: Iterable[str]) -> None:
        text = "".join(f"{row}\n" for row in rows)
        (directory / f"{name}.txt").write_text(text, encoding="utf-8")

    write("emotion", (f"{w}\t{e.category}\t{e.polarity}"
                      for w, e in sorted(lexicons.emotion_words.items())))
    write("antonyms", ("\t".join(sorted(p)) for p in
                       sorted(lexicons.antonym_pairs, key=lambda p: sorted(p))))
    write("action_nouns", (f"{n}\t{v}" for n, v in sorted(lexicons.action_nouns.items())))
    write("affordance_suffixes", (f"{s}\t{r}" for s, r in lexicons.affordance_suffixes))
    for name in ("stative_verbs", "emotional_verbs", "linking_verbs",
                 "non_product_actions", "place_prepositions", "human_refs",
                 "product_terms"):
        write(name, sorted(getattr(lexicons, name)))


def lexicon_checksums(directory: str | Path) -> dict[str, str]:
    """sha256 of every lexicon file present, keyed by file name."""
    directory = Path(directory)
    out = {}
    for name in FILES:
        path = directory / f"{name}.txt"
        if path.is_file():
            out[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()
    return out


def seed_lexicons() -> LexiconSet:
    return load_lexicons(SEED_DIR)
