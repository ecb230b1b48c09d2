import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reviewmine.errors import LexiconError
from reviewmine.lexicons import (
    DEFAULT_SUFFIXES,
    SEED_DIR,
    EmotionEntry,
    LexiconSet,
    lexicon_checksums,
    load_lexicons,
    lookup,
    save_lexicons,
)


def write(dir, **files):
    for name, text in files.items():
        (dir / f"{name}.txt").write_text(text, encoding="utf-8")


@pytest.fixture
def minimal(tmp_path):
    write(tmp_path, emotion="excited\tjoy\t+\n", place_prepositions="in\nat\n",
          antonyms="easy\thard\n")
    return tmp_path


def test_seed_examples(lexicons):
    assert "excited" in lexicons.emotion_words
    assert lexicons.is_place_preposition("at")
    assert lookup(lexicons, "antonym", "easy")
    assert lookup(lexicons, "antonym", "HARD")
    assert not lookup(lexicons, "emotion", "screen")
    assert lookup(lexicons, "human_refs", "husband")
    assert "contact" in lexicons.non_product_actions
    assert "buy" not in lexicons.affordance_blacklist()


def test_seed_suffixes(lexicons):
    suffixes = {s for s, _ in lexicons.affordance_suffixes}
    assert {"ability", "ibility", "able", "ible", "ity", "ities"} <= suffixes


def test_unknown_kind(lexicons):
    with pytest.raises(LexiconError, match="unknown lexicon kind"):
        lookup(lexicons, "colours", "red")


def test_minimal_dir_warns(minimal, caplog):
    with caplog.at_level(logging.WARNING):
        lex = load_lexicons(minimal)
    assert lex.stative_verbs == frozenset()
    assert lex.affordance_suffixes == DEFAULT_SUFFIXES
    assert "stative_verbs.txt" in caplog.text


@pytest.mark.parametrize("name", ["emotion", "place_prepositions", "antonyms"])
def test_missing_mandatory(minimal, name):
    (minimal / f"{name}.txt").unlink()
    with pytest.raises(LexiconError, match=name):
        load_lexicons(minimal)


def test_missing_dir(tmp_path):
    with pytest.raises(LexiconError, match=str(tmp_path / "nope")):
        load_lexicons(tmp_path / "nope")


def test_stative_and_linking_conflict(minimal):
    write(minimal, stative_verbs="seem\nknow\n", linking_verbs="seem\n")
    with pytest.raises(LexiconError, match="'seem'.*stative_verbs.*linking_verbs"):
        load_lexicons(minimal)


@pytest.mark.parametrize("text,msg", [
    ("easy\n", "expected"), ("easy\teasy\n", "own antonym"),
])
def test_bad_antonyms(minimal, text, msg):
    write(minimal, antonyms=text)
    with pytest.raises(LexiconError, match=msg):
        load_lexicons(minimal)


@pytest.mark.parametrize("text", ["excited\tjoy\n", "excited\tjoy\t?\n",
                                  "excited\tjoy\t+\nexcited\tfear\t-\n"])
def test_bad_emotions(minimal, text):
    write(minimal, emotion=text)
    with pytest.raises(LexiconError):
        load_lexicons(minimal)


def test_bad_suffix_rule(minimal):
    write(minimal, affordance_suffixes="able\tchop\n")
    with pytest.raises(LexiconError, match="suffix rule"):
        load_lexicons(minimal)


def test_comments_and_case(minimal):
    write(minimal, human_refs="# people\nHusband\n\n  Wife \n")
    lex = load_lexicons(minimal)
    assert lex.human_refs == {"husband", "wife"}


def test_antonym_symmetry(lexicons):
    for pair in lexicons.antonym_pairs:
        a, b = sorted(pair)
        assert lexicons.has_antonym(a) and lexicons.has_antonym(b)


def test_entries_lowercase(lexicons):
    for name in ("stative_verbs", "linking_verbs", "human_refs", "product_terms",
                 "place_prepositions", "non_product_actions", "emotional_verbs"):
        assert all(w == w.lower() for w in getattr(lexicons, name))


def test_seed_round_trip(lexicons, tmp_path):
    save_lexicons(lexicons, tmp_path)
    assert load_lexicons(tmp_path) == lexicons


def test_checksums_cover_files():
    sums = lexicon_checksums(SEED_DIR)
    assert "emotion.txt" in sums and all(len(v) == 64 for v in sums.values())


word = st.text("abcdefgh", min_size=1, max_size=6)


@st.composite
def lexicon_sets(draw):
    verbs = draw(st.lists(word, unique=True, max_size=12))
    cut = draw(st.integers(0, len(verbs)))
    stative, linking = verbs[:cut], verbs[cut:]
    pairs = draw(st.lists(st.tuples(word, word).filter(lambda p: p[0] != p[1]), max_size=5))
    emotions = draw(st.dictionaries(word, st.tuples(st.sampled_from(["joy", "fear"]),
                                                    st.sampled_from("+-")), max_size=5))
    return LexiconSet(
        emotion_words={w: EmotionEntry(c, p) for w, (c, p) in emotions.items()},
        stative_verbs=frozenset(stative), linking_verbs=frozenset(linking),
        place_prepositions=frozenset(draw(st.lists(word, max_size=4))),
        antonym_pairs=frozenset(frozenset(p) for p in pairs),
        human_refs=frozenset(draw(st.lists(word, max_size=4))),
        product_terms=frozenset(draw(st.lists(st.sampled_from(["screen", "battery life"]),
                                              max_size=2))),
        action_nouns=draw(st.dictionaries(word, word, max_size=3)),
    )


@settings(max_examples=100, deadline=None)
@given(lexicon_sets())
def test_save_load_round_trip(tmp_path_factory, lex):
    d = tmp_path_factory.mktemp("lex")
    save_lexicons(lex, d)
    assert load_lexicons(d) == lex
