from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbskit.corpus import Document
from sbskit.textprep import (
    PrepConfig,
    default_stopwords,
    load_stopwords,
    merge_multiword_terms,
    normalize,
    porter_stem,
    preprocess_corpus,
    preprocess_document,
    remove_stopwords,
    stem,
)

DATA = Path(__file__).parent / "data"


def porter_pairs():
    words = (DATA / "porter_voc.txt").read_text().split()
    stems = (DATA / "porter_output.txt").read_text().split()
    assert len(words) == len(stems)
    return list(zip(words, stems))


class TestNormalize:
    def test_punctuation_and_case(self):
        assert normalize("Supply-Chain Manager!") == ["supply", "chain", "manager"]

    def test_empty(self):
        assert normalize("") == []

    def test_digits_and_length(self):
        assert normalize("B2B 2024 roles", min_token_len=2) == ["b2b", "roles"]
        assert normalize("a b cd", min_token_len=2) == ["cd"]
        assert normalize("a b cd", min_token_len=1) == ["a", "b", "cd"]

    def test_underscore_splits(self):
        assert normalize("snake_case words") == ["snake", "case", "words"]

    def test_non_ascii_kept_casefolded(self):
        assert normalize("Größe MÜNCHEN") == ["grösse", "münchen"]

    @settings(max_examples=200, deadline=None)
    @given(st.text(max_size=80))
    def test_tokens_clean(self, text):
        for tok in normalize(text):
            assert tok
            assert tok == tok.casefold()
            assert all(ch.isalnum() for ch in tok)
            assert not tok.isdigit()


class TestMerge:
    def test_problem_solving(self):
        assert merge_multiword_terms(["problem", "solving", "skills"], {"problem solving"}) == ["problem_solving", "skills"]

    def test_out_of_the_box(self):
        assert merge_multiword_terms(["out", "of", "the", "box"], {"out of the box"}) == ["out_of_the_box"]

    def test_leftmost_longest(self):
        assert merge_multiword_terms(["a", "b", "c"], {"a b", "b c"}) == ["a_b", "c"]
        assert merge_multiword_terms(["a", "b", "c"], {"a b", "a b c"}) == ["a_b_c"]

    def test_no_phrases(self):
        assert merge_multiword_terms(["x", "y"], set()) == ["x", "y"]

    def test_partial_match_at_end(self):
        assert merge_multiword_terms(["x", "problem"], {"problem solving"}) == ["x", "problem"]


class TestStopwords:
    def test_basic(self):
        assert remove_stopwords(["the", "team", "and", "the", "plan"], default_stopwords()) == ["team", "plan"]

    def test_empty(self):
        assert remove_stopwords([], default_stopwords()) == []

    def test_identity(self):
        toks = ["team", "plan", "warehouse"]
        assert remove_stopwords(toks, default_stopwords()) == toks

    def test_merged_phrase_survives(self):
        cfg = PrepConfig(multiword_terms=frozenset({"out of the box"}))
        assert preprocess_document(Document("d", "Think out of the box"), cfg).tokens == ("think", "out_of_the_box")

    def test_default_list_size(self):
        assert 150 <= len(default_stopwords()) <= 200

    def test_load(self, tmp_path):
        p = tmp_path / "stop.txt"
        p.write_text("# header\nFoo\nbar  # inline\n")
        assert load_stopwords(p) == {"foo", "bar"}


class TestStem:
    @pytest.mark.parametrize("word,expected", [("caresses", "caress"), ("ponies", "poni"), ("sky", "sky")])
    def test_examples(self, word, expected):
        assert stem(word) == expected

    def test_reference_vocabulary(self):
        pairs = porter_pairs()
        assert len(pairs) > 20000
        wrong = [(w, s, porter_stem(w)) for w, s in pairs if porter_stem(w) != s]
        assert wrong == []

    def test_componentwise(self):
        assert stem("problem_solving") == "problem_solv"
        assert stem("love_of_learning") == "love_of_learn"

    def test_non_ascii_untouched(self):
        assert stem("münchen") == "münchen"
        assert stem("b2b") == "b2b"


class TestPipeline:
    def test_sentence(self):
        cfg = PrepConfig(multiword_terms=frozenset({"problem solving"}))
        seq = preprocess_document(Document("d", "Strong problem solving and planning."), cfg)
        assert seq.tokens == ("strong", "problem_solv", "plan")

    def test_only_stopwords(self):
        assert preprocess_document(Document("d", "the and of"), PrepConfig()).tokens == ()

    def test_deterministic(self):
        doc = Document("d", "Leading teams through change, with planning.")
        cfg = PrepConfig()
        assert preprocess_document(doc, cfg) == preprocess_document(doc, cfg)

    def test_corpus_order(self):
        docs = [Document("a", "planning"), Document("b", "teams")]
        assert [s.doc_id for s in preprocess_corpus(docs, PrepConfig())] == ["a", "b"]

    def test_config_validation(self):
        with pytest.raises(ValueError):
            PrepConfig(min_token_len=0)
        with pytest.raises(ValueError):
            PrepConfig(multiword_terms=frozenset({"single"}))
