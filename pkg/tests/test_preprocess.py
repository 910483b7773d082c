import string

import pytest
from hypothesis import given, strategies as st

from nimlang import preprocess as pp

LEXICON = pp.load_tag_lexicon()
RULES = pp.load_lemma_rules()


def pipeline(text):
    return pp.tag_and_lemmatize(pp.tokenize(pp.clean(text)), LEXICON, RULES)


class TestClean:
    def test_strips_symbols_and_collapses_whitespace(self):
        assert pp.clean("hello\t @world!!  ") == "hello world!!"

    def test_keeps_sentence_punctuation(self):
        assert pp.clean("ok, fine. really? yes!") == "ok, fine. really? yes!"

    def test_keeps_inner_apostrophe_only(self):
        assert pp.clean("don't 'quote'") == "don't quote"

    def test_drops_control_characters(self):
        assert pp.clean("a\x00b\x07c") == "a b c"


class TestTokenize:
    def test_separates_numbers_from_words(self):
        surfaces = [t.surface for t in pp.tokenize("room 12b")]
        assert surfaces == ["room", "12", "b"]

    def test_kinds(self):
        kinds = [t.kind for t in pp.tokenize("go to 5 now.")]
        assert kinds == [pp.WORD, pp.WORD, pp.NUMBER, pp.WORD, pp.PUNCTUATION]

    def test_empty_input(self):
        assert pp.tokenize("") == []

    @given(st.text(alphabet=string.printable, max_size=80))
    def test_lossless_over_cleaned_text(self, raw):
        cleaned = pp.clean(raw)
        rebuilt = list(cleaned)
        for t in pp.tokenize(cleaned):
            a, b = t.span
            assert cleaned[a:b] == t.surface
            rebuilt[a:b] = [""] * (b - a)
        # everything not covered by a span must be whitespace
        assert "".join(rebuilt).strip() == ""


class TestTagging:
    def test_lexicon_hits(self):
        tagged = pipeline("I am going to market")
        tags = {t.token.normalized: t.pos_tag for t in tagged}
        assert tags["i"] == "PRP"
        assert tags["going"] == "VBG"
        assert tags["market"] == "NN"

    def test_unknown_word_defaults_to_noun(self):
        (t,) = pipeline("mandi")
        assert t.pos_tag == "NN"
        assert t.coarse_pos == pp.NOUN

    def test_suffix_rules(self):
        (t,) = pipeline("zorping")
        assert t.pos_tag == "VBG"
        (t,) = pipeline("zorps")
        assert t.pos_tag == "NNS"

    def test_pronoun_detection(self):
        tagged = pipeline("I saw them")
        assert tagged[0].is_pronoun
        assert tagged[2].is_pronoun
        assert not tagged[1].is_pronoun

    def test_linking_verb_flag(self):
        tagged = pipeline("there may be rain")
        by_word = {t.token.normalized: t for t in tagged}
        assert by_word["may"].is_linking_verb
        assert by_word["be"].is_linking_verb
        assert not by_word["rain"].is_linking_verb


class TestLemmatize:
    @pytest.mark.parametrize("word,lemma", [
        ("seeds", "seed"),
        ("going", "go"),
        ("bought", "buy"),
        ("went", "go"),
        ("babies", "baby"),
        ("boxes", "box"),
        ("stopped", "stop"),
        ("running", "run"),
        ("bus", "bus"),
        ("glass", "glass"),
    ])
    def test_known_forms(self, word, lemma):
        (t,) = pipeline(word)
        assert t.lemma == lemma

    def test_numbers_and_punct_pass_through(self):
        tagged = pipeline("5 .")
        assert [t.lemma for t in tagged] == ["5", "."]

    @given(st.sampled_from(sorted(LEXICON.tags)))
    def test_idempotent(self, word):
        first = pipeline(word)
        if not first:
            return
        again = pipeline(first[0].lemma)
        if again:
            assert again[0].lemma == first[0].lemma


class TestDataLoading:
    def test_rejects_malformed_tsv(self, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("word only one column\n")
        with pytest.raises(ValueError):
            pp.load_tag_lexicon(lexicon_path=bad)

    def test_custom_lexicon(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("frob\tVB\n")
        lex = pp.load_tag_lexicon(lexicon_path=path)
        assert lex.tags == {"frob": "VB"}
