"""Text normalization: cleaning, tokenization, lexicon + suffix-rule POS
tagging and rule-based lemmatization.

The tagger is deliberately small and deterministic: a word/tag lexicon with
suffix fallback rules is adequate for short informal messages and keeps the
pipeline reproducible with no model downloads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from importlib import resources
from typing import List, Mapping, Optional, Sequence, Set, Tuple

WORD = "word"
NUMBER = "number"
PUNCTUATION = "punctuation"

NOUN = "noun"
VERB = "verb"
OTHER = "other"

_PRONOUN_TAGS = {"PRP", "PRP$", "WP", "WP$"}


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    span: Tuple[int, int]
    kind: str


@dataclass(frozen=True)
class TaggedToken:
    token: Token
    pos_tag: str
    coarse_pos: str
    lemma: str
    is_linking_verb: bool = False

    @property
    def is_pronoun(self) -> bool:
        return self.pos_tag in _PRONOUN_TAGS


@dataclass(frozen=True)
class TagLexicon:
    tags: Mapping[str, str]
    linking_verbs: frozenset
    suffix_rules: Tuple[Tuple[str, str], ...]


@dataclass(frozen=True)
class LemmaRules:
    exceptions: Mapping[str, str]


# --------------------------------------------------------------------------
# cleaning & tokenization

_KEPT_PUNCT = ".,?!"
_WORD_CHARS = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)?|\d+|[.,?!]")


def clean(raw: str) -> str:
    """Drop control characters and stray symbols, collapse whitespace.

    Sentence punctuation . , ? ! survives; everything else non-alphanumeric
    becomes a space so neighbouring words stay separated.
    """
    kept = []
    for i, ch in enumerate(raw):
        if ch.isalnum() or ch in _KEPT_PUNCT:
            kept.append(ch)
        elif ch == "'" and 0 < i < len(raw) - 1 and raw[i - 1].isalpha() and raw[i + 1].isalpha():
            kept.append(ch)  # apostrophe only inside a word (don't, it's)
        else:
            kept.append(" ")
    return " ".join("".join(kept).split())


def tokenize(cleaned: str) -> List[Token]:
    """Words, isolated numbers and punctuation as separate tokens.

    Spans index into the cleaned text, so joining surfaces at their spans
    reconstructs it losslessly.
    """
    tokens = []
    for m in _WORD_CHARS.finditer(cleaned):
        surface = m.group(0)
        if surface.isdigit():
            kind = NUMBER
        elif surface in _KEPT_PUNCT:
            kind = PUNCTUATION
        else:
            kind = WORD
        tokens.append(Token(surface, surface.lower(), (m.start(), m.end()), kind))
    return tokens


# --------------------------------------------------------------------------
# tagging

def coarse_pos(tag: str) -> str:
    if tag.startswith("NN"):
        return NOUN
    if tag.startswith("VB") or tag == "MD":
        return VERB
    return OTHER


def tag_pos(tokens: Sequence[Token], lexicon: TagLexicon) -> List[TaggedToken]:
    """Tag every token; unknown words fall back to suffix rules, then noun."""
    out = []
    for t in tokens:
        if t.kind == NUMBER:
            tag = "CD"
        elif t.kind == PUNCTUATION:
            tag = "."
        else:
            tag = lexicon.tags.get(t.normalized)
            if tag is None:
                for suffix, stag in lexicon.suffix_rules:
                    if t.normalized.endswith(suffix) and len(t.normalized) > len(suffix) + 1:
                        tag = stag
                        break
            if tag is None:
                tag = "NN"
        out.append(TaggedToken(
            token=t,
            pos_tag=tag,
            coarse_pos=coarse_pos(tag),
            lemma=t.normalized if t.kind == WORD else t.surface,
            is_linking_verb=t.normalized in lexicon.linking_verbs,
        ))
    return out


# --------------------------------------------------------------------------
# lemmatization

_VOWELS = "aeiou"


def _strip_plural(w: str) -> str:
    if len(w) > 4 and w.endswith("ies"):
        return w[:-3] + "y"
    for suf in ("ses", "xes", "zes", "ches", "shes"):
        if len(w) > len(suf) + 1 and w.endswith(suf):
            return w[:-2]
    if len(w) >= 4 and w.endswith("s") and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    return w


def _undouble(w: str) -> str:
    if len(w) >= 3 and w[-1] == w[-2] and w[-1] not in _VOWELS and w[-1] not in "ls":
        return w[:-1]
    return w


def _strip_ing(w: str) -> str:
    if len(w) > 4 and w.endswith("ing"):
        return _undouble(w[:-3])
    return w


def _strip_ed(w: str) -> str:
    if len(w) > 4 and w.endswith("ied"):
        return w[:-3] + "y"
    if len(w) > 3 and w.endswith("ed"):
        return _undouble(w[:-2])
    return w


def lemmatize(t: TaggedToken, rules: LemmaRules) -> str:
    """Reduce a tagged word to its base form; exception table wins.

    Idempotent: base forms pass through every rule unchanged.
    """
    if t.token.kind != WORD:
        return t.lemma
    w = t.token.normalized
    if w in rules.exceptions:
        return rules.exceptions[w]
    tag = t.pos_tag
    if tag in ("NNS", "NNPS"):
        return _strip_plural(w)
    if tag == "VBG":
        return _strip_ing(w)
    if tag in ("VBD", "VBN"):
        return _strip_ed(w)
    if tag == "VBZ":
        return _strip_plural(w)
    return w


def tag_and_lemmatize(tokens: Sequence[Token], lexicon: TagLexicon,
                      rules: LemmaRules) -> List[TaggedToken]:
    tagged = tag_pos(tokens, lexicon)
    return [replace(t, lemma=lemmatize(t, rules)) for t in tagged]


# --------------------------------------------------------------------------
# data file loading

def _read_tsv_lines(text: str):
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"expected 'a<TAB>b', got {line!r}")
        yield parts[0], parts[1]


def load_tag_lexicon(lexicon_path=None, linking_path=None) -> TagLexicon:
    """Load the word->tag lexicon and the linking/auxiliary verb list.

    Defaults to the files shipped with the package.
    """
    if lexicon_path is None:
        text = resources.files("nimlang.data").joinpath("tag_lexicon.tsv").read_text("utf-8")
    else:
        text = open(lexicon_path, encoding="utf-8").read()
    tags = {w.lower(): tag for w, tag in _read_tsv_lines(text)}

    if linking_path is None:
        ltext = resources.files("nimlang.data").joinpath("linking_verbs.txt").read_text("utf-8")
    else:
        ltext = open(linking_path, encoding="utf-8").read()
    linking = frozenset(
        w.strip().lower() for w in ltext.splitlines() if w.strip() and not w.startswith("#"))

    suffix_rules = (
        ("ing", "VBG"),
        ("ed", "VBD"),
        ("ly", "RB"),
        ("s", "NNS"),
    )
    return TagLexicon(tags=tags, linking_verbs=linking, suffix_rules=suffix_rules)


def load_lemma_rules(path=None) -> LemmaRules:
    if path is None:
        text = resources.files("nimlang.data").joinpath("lemma_exceptions.tsv").read_text("utf-8")
    else:
        text = open(path, encoding="utf-8").read()
    return LemmaRules(exceptions={a.lower(): b.lower() for a, b in _read_tsv_lines(text)})
