"""Review ingestion: raw JSON-lines records, tokenization, tagging, tagged files.

Raw review files hold one JSON object per line with keys ``id``, ``stars``,
``date``, ``votes`` and ``text``.  Tagged corpus files hold one token per line
as ``surface<TAB>lemma<TAB>tag``; a blank line ends a sentence and a line
``#review <id> <stars> <date> <votes>`` starts a review.  Other lines that
start with ``#`` and are not three tab-separated fields are comments.
"""

from __future__ import annotations

import datetime as dt
import enum
import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CorpusFormatError
from .lexicons import LexiconSet


class Pos(str, enum.Enum):
    NOUN = "NOUN"
    PROPN = "PROPN"
    VERB = "VERB"
    LINKV = "LINKV"
    ADJ = "ADJ"
    ADV = "ADV"
    PRON = "PRON"
    PREP = "PREP"
    DET = "DET"
    NEG = "NEG"
    NUM = "NUM"
    OTHER = "OTHER"


ARTICLES = frozenset({"a", "an", "the"})
NEGATIONS = frozenset({"not", "cannot", "n't", "never", "without"})


@dataclass(frozen=True)
class Token:
    index: int
    surface: str
    lemma: str
    pos: Pos = Pos.OTHER

    @property
    def is_article(self) -> bool:
        return self.lemma in ARTICLES


@dataclass(frozen=True)
class Sentence:
    review_id: str
    index: int
    tokens: tuple[Token, ...]
    # 1-based position of the sentence in its corpus; standoff refs use it.
    number: int = 0

    @property
    def ref(self) -> str:
        return f"s{self.number}"

    @property
    def text(self) -> str:
        return detokenize(t.surface for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Review:
    id: str
    stars: int
    date: dt.date
    helpful_votes: int
    text: str
    sentences: tuple[Sentence, ...] = field(default=())

    def __post_init__(self):
        if not 1 <= self.stars <= 5:
            raise CorpusFormatError(f"review {self.id}: stars out of range ({self.stars})")
        if self.helpful_votes < 0:
            raise CorpusFormatError(f"review {self.id}: negative helpful votes")


# ---------------------------------------------------------------------------
# raw records


def _parse_record(obj, lineno: int) -> Review:
    if not isinstance(obj, dict):
        raise CorpusFormatError(f"line {lineno}: record is not an object")
    missing = [k for k in ("id", "stars", "date", "votes", "text") if k not in obj]
    if missing:
        raise CorpusFormatError(f"line {lineno}: missing field(s) {', '.join(missing)}")
    stars, votes, text = obj["stars"], obj["votes"], obj["text"]
    if not isinstance(stars, int) or isinstance(stars, bool):
        raise CorpusFormatError(f"line {lineno}: stars must be an integer")
    if not 1 <= stars <= 5:
        raise CorpusFormatError(f"line {lineno}: stars out of range ({stars})")
    if not isinstance(votes, int) or isinstance(votes, bool) or votes < 0:
        raise CorpusFormatError(f"line {lineno}: votes must be a non-negative integer")
    if not isinstance(text, str):
        raise CorpusFormatError(f"line {lineno}: text must be a string")
    try:
        date = dt.date.fromisoformat(str(obj["date"]))
    except ValueError:
        raise CorpusFormatError(f"line {lineno}: bad ISO-8601 date {obj['date']!r}") from None
    return Review(str(obj["id"]), stars, date, votes, text)


def load_reviews(path: str | Path) -> list[Review]:
    reviews = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"line {lineno}: malformed record ({exc.msg})") from None
            reviews.append(_parse_record(obj, lineno))
    return reviews


def dump_reviews(reviews: Iterable[Review]) -> str:
    lines = []
    for r in reviews:
        lines.append(json.dumps({"id": r.id, "stars": r.stars, "date": r.date.isoformat(),
                                 "votes": r.helpful_votes, "text": r.text}, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# tokenization

ABBREVIATIONS = ("e.g.", "i.e.", "etc.", "vs.", "mr.", "dr.")
_ABBREV = "|".join(re.escape(a) for a in ABBREVIATIONS)
_TOKEN_RE = re.compile(
    rf"(?i:{_ABBREV})(?!\w)"
    r"|(?i:n['’]t)(?!\w)"
    r"|['’](?i:s|re|ve|ll|d|m)(?!\w)"
    r"|\w+?(?=(?i:n['’]t)(?!\w))"
    r"|\w+(?:-\w+)*"
    r"|[^\w\s]"
)
_TERMINAL = frozenset(".!?")
_CLOSERS = frozenset(")]}\"'”’")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


def detokenize(surfaces: Iterable[str]) -> str:
    out = ""
    glue_next = False
    open_quotes = 0
    for s in surfaces:
        closing_quote = s == '"' and open_quotes % 2 == 1
        if out and not (glue_next or closing_quote or s in ",.!?;:)]}%"
                        or s.lower() in ("n't", "n’t") or (s[:1] in "'’" and len(s) > 1)):
            out += " "
        out += s
        if s == '"':
            open_quotes += 1
        glue_next = s in ("(", "[", "#") or (s == '"' and not closing_quote)
    return out


def split_sentences(surfaces: Sequence[str]) -> list[list[str]]:
    sentences: list[list[str]] = []
    current: list[str] = []
    i = 0

    def closes(s: str) -> bool:
        # a straight double quote closes only if one is open in this sentence
        if s == '"':
            return current.count('"') % 2 == 1
        return s in _TERMINAL or s in _CLOSERS

    while i < len(surfaces):
        current.append(surfaces[i])
        if surfaces[i] in _TERMINAL:
            while i + 1 < len(surfaces) and closes(surfaces[i + 1]):
                i += 1
                current.append(surfaces[i])
            sentences.append(current)
            current = []
        i += 1
    if current:
        sentences.append(current)
    return sentences


# Forms of "be" are the one irregular paradigm the lemmatizer knows.
BE_FORMS = frozenset({"be", "am", "is", "are", "was", "were", "been", "being",
                      "'s", "’s", "'re", "’re", "'m", "’m"})
_E_REPAIR = ("iv", "ic", "iz", "us", "ak", "ov", "ur", "ag", "os", "at", "uc", "ut")


def _protected(low: str, lexicons: LexiconSet | None) -> bool:
    if low in CLOSED_CLASS:
        return True
    if lexicons is None:
        return False
    return (low in lexicons.emotion_words or low in lexicons.antonym_words
            or low in lexicons.human_refs or low in lexicons.product_terms
            or low in lexicons.place_prepositions or low in lexicons.action_nouns
            or low in lexicons.affordance_blacklist())


def lemmatize(surface: str, lexicons: LexiconSet | None = None) -> str:
    """Lowercase plus suffix stripping; words found in a lexicon are kept."""
    low = surface.lower()
    if low in BE_FORMS:
        return "be"
    if low in ("n't", "n’t"):
        return "not"
    if _protected(low, lexicons) or not low.isalpha():
        return low
    if low.endswith(("ies", "ied")) and len(low) > 4:
        return low[:-3] + "y"
    if low.endswith("ied"):
        return low[:-1]
    if low.endswith(("ches", "shes", "sses", "xes", "zes")) and len(low) > 4:
        return low[:-2]
    if low.endswith("ing") and len(low) > 5:
        return _repair(low[:-3])
    if low.endswith("ed") and len(low) > 4:
        return _repair(low[:-2])
    if low.endswith("s") and not low.endswith(("ss", "us", "is")) and len(low) > 3:
        return low[:-1]
    return low


def _repair(stem: str) -> str:
    if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in "lsz":
        return stem[:-1]
    if stem.endswith(_E_REPAIR):
        return stem + "e"
    return stem


def segment_and_tokenize(review: Review, lexicons: LexiconSet, start: int = 1) -> Review:
    """Split ``review.text`` into sentences of untagged tokens.

    ``start`` is the corpus-level number given to the first sentence.
    """
    sentences = []
    for i, group in enumerate(split_sentences(tokenize(review.text))):
        tokens = tuple(Token(j, s, lemmatize(s, lexicons)) for j, s in enumerate(group))
        sentences.append(Sentence(review.id, i, tokens, start + i))
    return replace(review, sentences=tuple(sentences))


# ---------------------------------------------------------------------------
# tagging

DETERMINERS = frozenset({"this", "that", "these", "those", "each", "every", "some",
                         "any", "another", "no", "all", "both", "either", "neither"})
DEMONSTRATIVES = frozenset({"this", "that", "these", "those"})
PRONOUNS = frozenset({
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves",
    "you", "your", "yours", "yourself", "he", "him", "his", "himself", "she", "her",
    "hers", "herself", "it", "its", "itself", "they", "them", "their", "theirs",
    "themselves", "who", "whom", "whose", "which", "what", "there", "someone",
    "something", "anything", "everything", "nothing", "everyone", "anyone",
})
POSSESSIVES = frozenset({"my", "your", "his", "her", "its", "our", "their"})
PREPOSITIONS = frozenset({
    "of", "for", "with", "to", "from", "about", "through", "during", "before",
    "after", "as", "than", "per", "via", "up", "down", "off", "out", "over",
    "across", "along", "against", "among", "toward", "towards", "upon", "within",
    "by", "since", "until", "despite",
})
CONJUNCTIONS = frozenset({"and", "or", "but", "nor", "because", "if", "while",
                          "although", "though", "unless", "whether", "yet"})
AUXILIARIES = frozenset({"will", "would", "can", "could", "shall", "should", "may",
                         "might", "must", "do", "does", "did", "'ll", "’ll", "'d", "’d",
                         "'ve", "’ve", "ca", "wo"})
DEGREE_ADVERBS = frozenset({"so", "very", "extremely", "really", "quite", "too",
                            "pretty", "fairly", "rather", "incredibly", "super"})
TIME_ADVERBS = frozenset({"yesterday", "today", "tomorrow", "tonight", "daily", "now",
                          "then", "again", "soon", "always", "often", "already", "still",
                          "also", "just", "even", "ever", "only", "here", "almost",
                          "once", "twice", "sometimes", "later", "well", "much"})
SUBJECT_PRONOUNS = frozenset({"i", "we", "you", "they", "he", "she", "it", "who"})
CLOSED_CLASS = (ARTICLES | NEGATIONS | DETERMINERS | PRONOUNS | PREPOSITIONS
                | CONJUNCTIONS | AUXILIARIES | DEGREE_ADVERBS | TIME_ADVERBS | BE_FORMS)


def _suffix_tag(low: str) -> Pos | None:
    if len(low) > 3 and low.endswith("ly"):
        return Pos.ADV
    if len(low) > 5 and low.endswith(("able", "ible")):
        return Pos.ADJ
    if len(low) > 5 and low.endswith(("ity", "ities", "ness", "tion", "tions")):
        return Pos.NOUN
    if len(low) > 5 and low.endswith(("ize", "ify")):
        return Pos.VERB
    return None


def _tag_one(tokens: Sequence[Token], i: int, tags: list[Pos], lexicons: LexiconSet) -> Pos:
    tok = tokens[i]
    low = tok.surface.lower()
    if not any(c.isalnum() for c in low):
        return Pos.OTHER
    if low in ARTICLES or low in DETERMINERS:
        return Pos.DET
    if low in NEGATIONS:
        return Pos.NEG
    if low in PRONOUNS:
        return Pos.PRON
    if low in lexicons.place_prepositions or low in PREPOSITIONS:
        return Pos.PREP
    if low in BE_FORMS or tok.lemma in lexicons.linking_verbs:
        return Pos.LINKV
    if low in CONJUNCTIONS or low in AUXILIARIES:
        return Pos.OTHER
    if low in DEGREE_ADVERBS or low in TIME_ADVERBS:
        return Pos.ADV
    if low[0].isdigit():
        return Pos.NUM
    by_suffix = _suffix_tag(low)
    if by_suffix is not None:
        return by_suffix
    first_word = all(not any(c.isalnum() for c in t.surface) for t in tokens[:i])
    if not first_word and tok.surface[0].isupper():
        return Pos.PROPN
    # Context: previous tag, skipping adverbs.
    j = i - 1
    while j >= 0 and tags[j] is Pos.ADV:
        j -= 1
    prev_low = tokens[j].surface.lower() if j >= 0 else ""
    prev = tags[j] if j >= 0 else None
    nxt = tokens[i + 1].surface.lower() if i + 1 < len(tokens) else "."
    nxt_open = any(c.isalnum() for c in nxt) and nxt not in CONJUNCTIONS
    if prev is Pos.LINKV and (low.endswith(("ed", "ing")) or not nxt_open):
        return Pos.ADJ
    if tok.lemma in lexicons.antonym_words and low == tok.lemma:
        return Pos.ADJ
    if prev_low == "to" or prev_low in AUXILIARIES or prev_low in SUBJECT_PRONOUNS:
        return Pos.VERB
    if prev in (Pos.DET, Pos.ADJ) and low.endswith(("ed", "ing")):
        return Pos.ADJ
    if prev is Pos.PREP and not low.endswith("ing"):
        return Pos.NOUN
    if low.endswith("ing") or (low.endswith("ed") and len(low) > 3):
        return Pos.VERB
    # third-person verb after a nominal subject: "the battery lasts", "it makes me"
    if (prev in (Pos.NOUN, Pos.PROPN) and low.endswith("s") and not low.endswith("ss")
            and (not nxt_open or nxt in ARTICLES | DETERMINERS | PRONOUNS | TIME_ADVERBS
                 | DEGREE_ADVERBS or nxt.endswith("ly"))):
        return Pos.VERB
    if tok.lemma in lexicons.antonym_words:
        return Pos.ADJ
    if tok.lemma in lexicons.affordance_blacklist():
        return Pos.VERB
    return Pos.NOUN


def tag(sentence: Sentence, lexicons: LexiconSet) -> Sentence:
    """Assign coarse tags: closed-class lookup, suffix rules, capitals, context."""
    tags: list[Pos] = []
    for i in range(len(sentence.tokens)):
        tags.append(_tag_one(sentence.tokens, i, tags, lexicons))
    tokens = tuple(replace(t, pos=p) for t, p in zip(sentence.tokens, tags))
    return replace(sentence, tokens=tokens)


def prepare_corpus(reviews: Iterable[Review], lexicons: LexiconSet) -> list[Review]:
    """Segment, tokenize and tag raw reviews, numbering sentences corpus-wide."""
    out = []
    number = 1
    for review in reviews:
        review = segment_and_tokenize(review, lexicons, start=number)
        sentences = tuple(tag(s, lexicons) for s in review.sentences)
        number += len(sentences)
        out.append(replace(review, sentences=sentences))
    return out


# ---------------------------------------------------------------------------
# tagged corpus files


def _check_token(surface: str, lemma: str, pos: Pos, where: str) -> None:
    if lemma in ARTICLES and pos is not Pos.DET:
        raise CorpusFormatError(f"{where}: article {surface!r} must be tagged DET")
    if lemma != lemma.lower():
        raise CorpusFormatError(f"{where}: lemma {lemma!r} must be lowercase")


def parse_tagged(text: str, source: str = "<string>") -> list[Review]:
    reviews: list[Review] = []
    header: tuple[str, int, dt.date, int] | None = None
    sentences: list[Sentence] = []
    tokens: list[Token] = []
    number = 1

    def close_sentence():
        nonlocal tokens, number
        if tokens:
            sentences.append(Sentence(header[0], len(sentences), tuple(tokens), number))
            number += 1
            tokens = []

    def close_review():
        nonlocal sentences
        close_sentence()
        if header is not None:
            text = " ".join(s.text for s in sentences)
            reviews.append(Review(header[0], header[1], header[2], header[3], text,
                                  tuple(sentences)))
        sentences = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        where = f"{source}:{lineno}"
        line = raw.rstrip("\r\n")
        if line.startswith("#review ") or line == "#review":
            close_review()
            parts = line.split()
            if len(parts) != 5:
                raise CorpusFormatError(f"{where}: expected '#review <id> <stars> <date> <votes>'")
            try:
                stars, votes = int(parts[2]), int(parts[4])
                date = dt.date.fromisoformat(parts[3])
            except ValueError:
                raise CorpusFormatError(f"{where}: bad review header") from None
            if not 1 <= stars <= 5:
                raise CorpusFormatError(f"{where}: stars out of range ({stars})")
            if votes < 0:
                raise CorpusFormatError(f"{where}: votes must be non-negative")
            header = (parts[1], stars, date, votes)
            continue
        if line.startswith("#") and line.count("\t") != 2:
            continue
        if not line.strip():
            close_sentence()
            continue
        if header is None:
            raise CorpusFormatError(f"{where}: token before any '#review' header")
        parts = line.split("\t")
        if len(parts) != 3 or not parts[0]:
            raise CorpusFormatError(f"{where}: expected 'surface<TAB>lemma<TAB>tag'")
        surface, lemma, tag_name = parts
        try:
            pos = Pos(tag_name)
        except ValueError:
            raise CorpusFormatError(f"{where}: unknown tag {tag_name!r}") from None
        _check_token(surface, lemma, pos, where)
        tokens.append(Token(len(tokens), surface, lemma, pos))
    close_review()
    return reviews


def load_tagged(path: str | Path) -> list[Review]:
    path = Path(path)
    return parse_tagged(path.read_text(encoding="utf-8"), str(path))


def export_tagged(reviews: Iterable[Review]) -> str:
    lines = []
    for r in reviews:
        lines.append(f"#review {r.id} {r.stars} {r.date.isoformat()} {r.helpful_votes}")
        for s in r.sentences:
            for t in s.tokens:
                lines.append(f"{t.surface}\t{t.lemma}\t{t.pos.value}")
            lines.append("")
    return "".join(line + "\n" for line in lines)


def corpus_checksum(reviews: Iterable[Review]) -> str:
    return hashlib.sha256(export_tagged(reviews).encode("utf-8")).hexdigest()


def corpus_sentences(reviews: Iterable[Review]) -> list[Sentence]:
    return [s for r in reviews for s in r.sentences]


def is_interrogative(sentence: Sentence) -> bool:
    surfaces = [t.surface for t in sentence.tokens if t.surface not in _CLOSERS]
    return bool(surfaces) and surfaces[-1] == "?"
