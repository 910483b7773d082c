"""Placeholder-based translation of binding text and realignment of
ideograph positions to the translated word order.

Picturable words are replaced by opaque markers like ⟦CW1⟧ before the text
goes to the translation provider; the markers carry alignment through
third-party MT and are split back out afterwards.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Protocol, Sequence, Tuple

from .complexity import PartitionResult
from .errors import MarkerLostError, MarkerMismatchError, ProviderUnreachableError
from .preprocess import PUNCTUATION

MARKER_OPEN = "⟦"   # ⟦
MARKER_CLOSE = "⟧"  # ⟧
_MARKER_RE = re.compile(r"⟦CW(\d+)⟧")


def marker(n: int) -> str:
    return f"{MARKER_OPEN}CW{n}{MARKER_CLOSE}"


@dataclass(frozen=True)
class PlaceholderedSentence:
    text_with_placeholders: str
    # marker number -> payload carried through translation; the pipeline
    # stores the Elementalization-bearing segment here
    marker_map: Mapping[int, object]


class TranslationProvider(Protocol):
    def translate(self, text: str, source_lang: str, target_lang: str) -> str: ...


def _join_surfaces(parts: Sequence[Tuple[str, bool]]) -> str:
    """Join token surfaces with single spaces; punctuation attaches left."""
    out = []
    for surface, is_punct in parts:
        if is_punct or not out:
            out.append(surface)
        else:
            out.append(" " + surface)
    return "".join(out)


def insert_placeholders(p: PartitionResult, payloads: Mapping[int, object]) -> PlaceholderedSentence:
    """Render the sentence in source order with picturable words replaced.

    ``payloads`` maps original token indices of picturable words to the
    object each marker should carry (typically an Elementalization).
    """
    items = {}
    for idx, t, _lemma in p.picturable:
        items[idx] = ("picturable", t)
    for idx, t in p.binding:
        items[idx] = ("binding", t)

    parts = []
    marker_map: Dict[int, object] = {}
    n = 0
    for idx in sorted(items):
        role, t = items[idx]
        if role == "picturable":
            n += 1
            marker_map[n] = payloads[idx]
            parts.append((marker(n), False))
        else:
            parts.append((t.token.surface, t.token.kind == PUNCTUATION))
    return PlaceholderedSentence(_join_surfaces(parts), marker_map)


def markers_in(text: str) -> List[int]:
    return [int(m.group(1)) for m in _MARKER_RE.finditer(text)]


def translate(s: PlaceholderedSentence, target_lang: str, tr: TranslationProvider,
              source_lang: str = "en") -> str:
    """Translate the placeholdered sentence; every marker must survive once."""
    translated = tr.translate(s.text_with_placeholders, source_lang, target_lang)
    found = markers_in(translated)
    expected = sorted(s.marker_map)
    if sorted(found) != expected:
        missing = set(expected).symmetric_difference(found)
        raise MarkerLostError([marker(n) for n in sorted(missing)] or [marker(n) for n in found])
    return translated


def realign(translated: str, marker_map: Mapping[int, object]) -> List[Tuple[str, object]]:
    """Split translated text at markers into an ordered segment plan.

    Returns ("text", surface) and ("ideograph", payload) entries in
    translated order; empty text runs are dropped.
    """
    found = markers_in(translated)
    if sorted(found) != sorted(marker_map):
        raise MarkerMismatchError(
            f"markers in text {sorted(found)} do not match map keys {sorted(marker_map)}")
    plan: List[Tuple[str, object]] = []
    pos = 0
    for m in _MARKER_RE.finditer(translated):
        chunk = translated[pos:m.start()].strip()
        if chunk:
            plan.append(("text", chunk))
        plan.append(("ideograph", marker_map[int(m.group(1))]))
        pos = m.end()
    tail = translated[pos:].strip()
    if tail:
        plan.append(("text", tail))
    return plan


# --------------------------------------------------------------------------
# providers

class IdentityTranslationProvider:
    """Returns input unchanged; the default when binding language = source."""

    def __init__(self):
        self.calls = 0

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        self.calls += 1
        return text


class TableTranslationProvider:
    """Replay mock keyed by (text, target language)."""

    def __init__(self, table: Mapping[Tuple[str, str], str]):
        self.table = dict(table)
        self.calls = 0

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        self.calls += 1
        try:
            return self.table[(text, target_lang)]
        except KeyError:
            raise ProviderUnreachableError(
                f"no stored translation for {text!r} -> {target_lang}") from None


class HttpTranslationProvider:
    """POST {q, source, target} -> {translatedText}."""

    def __init__(self, endpoint: str, timeout: float = 30.0):
        self.endpoint = endpoint
        self.timeout = timeout
        self.calls = 0

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        import requests

        self.calls += 1
        try:
            resp = requests.post(
                self.endpoint,
                json={"q": text, "source": source_lang, "target": target_lang},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            return resp.json()["translatedText"]
        except (OSError, ValueError, KeyError) as e:
            raise ProviderUnreachableError(f"translation provider failed: {e}") from e
        except Exception as e:  # requests.RequestException
            raise ProviderUnreachableError(f"translation provider failed: {e}") from e
