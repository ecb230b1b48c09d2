"""Generators for synthetic tagged corpora and concept summaries."""

import datetime as dt

from hypothesis import strategies as st

from reviewmine.corpus import Pos, Review, Sentence, Token
from reviewmine.extract import ConceptAnnotation, ConceptKind, SentenceSummary

P = Pos
POOL = [
    ("the", "the", P.DET), ("a", "a", P.DET), ("an", "an", P.DET), ("this", "this", P.DET),
    ("screen", "screen", P.NOUN), ("battery", "battery", P.NOUN), ("pixels", "pixel", P.NOUN),
    ("dust", "dust", P.NOUN), ("light", "light", P.NOUN), ("case", "case", P.NOUN),
    ("books", "book", P.NOUN), ("bed", "bed", P.NOUN), ("night", "night", P.NOUN),
    ("sun", "sun", P.NOUN), ("setup", "setup", P.NOUN), ("husband", "husband", P.NOUN),
    ("Kindle", "kindle", P.PROPN), ("Voyage", "voyage", P.PROPN),
    ("read", "read", P.VERB), ("carry", "carry", P.VERB), ("hold", "hold", P.VERB),
    ("charge", "charge", P.VERB), ("bought", "buy", P.VERB), ("love", "love", P.VERB),
    ("know", "know", P.VERB), ("contact", "contact", P.VERB), ("returned", "return", P.VERB),
    ("noticed", "notice", P.VERB), ("killing", "kill", P.VERB), ("keep", "keep", P.VERB),
    ("is", "be", P.LINKV), ("seems", "seem", P.LINKV), ("looks", "look", P.LINKV),
    ("easy", "easy", P.ADJ), ("hard", "hard", P.ADJ), ("dead", "dead", P.ADJ),
    ("bright", "bright", P.ADJ), ("heavy", "heavy", P.ADJ), ("nice", "nice", P.ADJ),
    ("excited", "excited", P.ADJ), ("happy", "happy", P.ADJ), ("portable", "portable", P.ADJ),
    ("very", "very", P.ADV), ("extremely", "extremely", P.ADV), ("easily", "easily", P.ADV),
    ("quickly", "quickly", P.ADV), ("finally", "finally", P.ADV), ("outside", "outside", P.ADV),
    ("it", "it", P.PRON), ("I", "i", P.PRON), ("they", "they", P.PRON), ("my", "my", P.PRON),
    ("in", "in", P.PREP), ("at", "at", P.PREP), ("on", "on", P.PREP), ("under", "under", P.PREP),
    ("of", "of", P.PREP), ("with", "with", P.PREP), ("to", "to", P.PREP), ("for", "for", P.PREP),
    ("not", "not", P.NEG), ("never", "never", P.NEG), ("without", "without", P.NEG),
    ("300", "300", P.NUM),
    ("and", "and", P.OTHER), ("or", "or", P.OTHER), (",", ",", P.OTHER), ("!", "!", P.OTHER),
]

token_plans = st.lists(st.sampled_from(POOL), min_size=1, max_size=14)
review_plans = st.lists(token_plans, min_size=1, max_size=3)
corpus_plans = st.lists(review_plans, min_size=1, max_size=3)


def make_corpus(plan):
    """Reviews from nested lists of (surface, lemma, pos); sentences numbered from 1."""
    reviews = []
    number = 1
    for r, sentences in enumerate(plan):
        built = []
        for s, toks in enumerate(sentences):
            toks = list(toks) + [(".", ".", P.OTHER)]
            tokens = tuple(Token(i, a, b, c) for i, (a, b, c) in enumerate(toks))
            built.append(Sentence(f"r{r}", s, tokens, number))
            number += 1
        text = " ".join(x.text for x in built)
        reviews.append(Review(f"r{r}", 3, dt.date(2016, 1, 1), 0, text, tuple(built)))
    return reviews


KINDS = list(ConceptKind)
concept = st.tuples(st.sampled_from(KINDS),
                    st.sampled_from(["screen", "Screen", "battery", "read e-books", "in the dark",
                                     "resolution", "brightness", "excited", "easy", "carry"]))
sentence_concepts = st.lists(concept, max_size=6)
summary_plans = st.lists(sentence_concepts, max_size=40)


def make_summaries(plan):
    """Summaries carrying only the given (kind, normalized) concepts."""
    out = []
    for n, concepts in enumerate(plan, 1):
        sentence = Sentence(f"r{n % 4}", n, (Token(0, "x", "x", P.NOUN),), n)
        anns = tuple(ConceptAnnotation(f"{k.letter}{i}", k, 0, 0, 0, norm)
                     for i, (k, norm) in enumerate(concepts, 1))
        out.append(SentenceSummary(sentence, anns))
    return out
