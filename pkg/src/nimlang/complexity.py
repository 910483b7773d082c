"""Word-level complexity gate: splits a tagged sentence into picturable
words (nouns and complex verbs) and the binding text that carries syntax.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import List, Optional, Sequence, Tuple

from .errors import MessageTooLongError
from .preprocess import NOUN, OTHER, VERB, WORD, TaggedToken

NOUN_GATE_ALL = "all"
NOUN_GATE_COMPLEXITY = "complexity"

# normalization knees: 5+ syllables or 10+ characters saturate their feature
_SYLLABLE_SPAN = 4.0
_CHAR_SPAN = 9.0


@dataclass(frozen=True)
class ComplexityFeatures:
    syllables: int
    chars: int
    familiar: bool
    score: float


@dataclass(frozen=True)
class PartitionConfig:
    max_words: int = 20
    strict: bool = True
    noun_gate: str = NOUN_GATE_ALL
    verb_threshold: float = 0.5
    noun_threshold: float = 0.5
    weights: Tuple[float, float, float] = (0.4, 0.2, 0.4)
    familiar_words: frozenset = frozenset()


@dataclass(frozen=True)
class PartitionResult:
    # (original token index, token, lemma) in source order
    picturable: Tuple[Tuple[int, TaggedToken, str], ...]
    # (original token index, token) in source order
    binding: Tuple[Tuple[int, TaggedToken], ...]

    @property
    def order_map(self) -> Tuple[int, ...]:
        return tuple(sorted(
            [i for i, _, _ in self.picturable] + [i for i, _ in self.binding]))

    @property
    def picturable_lemmas(self) -> Tuple[str, ...]:
        return tuple(lemma for _, _, lemma in self.picturable)


def count_syllables(word: str) -> int:
    """Vowel-group count with a silent-e correction; floor of 1."""
    w = word.lower()
    groups = 0
    prev_vowel = False
    for ch in w:
        is_vowel = ch in "aeiouy"
        if is_vowel and not prev_vowel:
            groups += 1
        prev_vowel = is_vowel
    if w.endswith("e") and not w.endswith("le") and groups > 1:
        groups -= 1
    return max(1, groups)


def word_complexity(lemma: str, familiar_list, weights=(0.4, 0.2, 0.4)) -> ComplexityFeatures:
    """Weighted readability-style score in [0, 1].

    weights = (syllable weight, character weight, unfamiliarity weight).
    """
    if not lemma:
        raise ValueError("lemma must be non-empty")
    w1, w2, w3 = weights
    syllables = count_syllables(lemma)
    chars = len(lemma)
    familiar = lemma.lower() in familiar_list
    norm_syl = min(max((syllables - 1) / _SYLLABLE_SPAN, 0.0), 1.0)
    norm_chars = min(max((chars - 1) / _CHAR_SPAN, 0.0), 1.0)
    score = w1 * norm_syl + w2 * norm_chars + w3 * (0.0 if familiar else 1.0)
    score = min(max(score, 0.0), 1.0)
    return ComplexityFeatures(syllables=syllables, chars=chars, familiar=familiar, score=score)


def partition(tokens: Sequence[TaggedToken], cfg: PartitionConfig) -> PartitionResult:
    """Exhaustive, exclusive split of tokens into picturable and binding.

    Nouns go picturable under the default all-nouns gate, or only above the
    noun threshold under the complexity gate. Verbs go picturable only when
    not linking and scoring at or above the verb threshold. Pronouns,
    numbers and punctuation always bind.
    """
    word_count = sum(1 for t in tokens if t.token.kind == WORD)
    if cfg.strict and word_count > cfg.max_words:
        raise MessageTooLongError(word_count, cfg.max_words)

    picturable = []
    binding = []
    for i, t in enumerate(tokens):
        if t.token.kind == WORD and not t.is_pronoun and _is_picturable(t, cfg):
            picturable.append((i, t, t.lemma))
        else:
            binding.append((i, t))
    return PartitionResult(picturable=tuple(picturable), binding=tuple(binding))


def _is_picturable(t: TaggedToken, cfg: PartitionConfig) -> bool:
    # linking/auxiliary verbs carry no picturable content even when a rare
    # inflection is mistagged as a noun
    if t.is_linking_verb:
        return False
    if t.coarse_pos == NOUN:
        if cfg.noun_gate == NOUN_GATE_ALL:
            return True
        feats = word_complexity(t.lemma, cfg.familiar_words, cfg.weights)
        return feats.score >= cfg.noun_threshold
    if t.coarse_pos == VERB:
        feats = word_complexity(t.lemma, cfg.familiar_words, cfg.weights)
        return feats.score >= cfg.verb_threshold
    return False


def load_familiar_words(path=None) -> frozenset:
    """Easy-word list, one word per line."""
    if path is None:
        text = resources.files("nimlang.data").joinpath("familiar_words.txt").read_text("utf-8")
    else:
        text = open(path, encoding="utf-8").read()
    return frozenset(w.strip().lower() for w in text.splitlines()
                     if w.strip() and not w.startswith("#"))
