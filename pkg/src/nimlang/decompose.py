"""Full compile orchestration: partition, per-word decomposition (ontology
first, LLM fallback second) and multimodal message assembly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Dict, List, Mapping, Optional, Tuple

from . import binding_translate as bt
from . import llm_fallback as llm
from . import ontology as ont
from .complexity import PartitionResult, partition
from .config import PipelineConfig
from .errors import (
    EmptyMessageError,
    ExhaustedRetriesError,
    OovWithoutFallbackError,
)
from .preprocess import (
    NOUN,
    VERB,
    TagLexicon,
    LemmaRules,
    clean,
    load_lemma_rules,
    load_tag_lexicon,
    tag_and_lemmatize,
    tokenize,
)

TEXT = "text"
IDEOGRAPH = "ideograph"


@dataclass(frozen=True)
class Elementalization:
    cw: str  # surface word; uppercased only at serialization time
    sc: str
    st: str
    explication: ont.Explication


@dataclass(frozen=True)
class IdeographIcons:
    sc: str
    st: str
    sm: Mapping[str, str]  # molecule id -> icon id


@dataclass(frozen=True)
class Segment:
    kind: str
    surface: Optional[str] = None
    elem: Optional[Elementalization] = None
    icons: Optional[IdeographIcons] = None
    # position of the complex word in the source sentence; used to restore
    # canonical order after translation reordering; not serialized
    source_order: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class NimMessage:
    source_text: str
    source_lang: str
    binding_lang: str
    segments: Tuple[Segment, ...]
    ontology_version: int
    # wall-clock metadata; excluded from the wire format and from equality
    # so identical compiles stay byte-identical
    created_at: str = field(default="", compare=False)


@dataclass
class Providers:
    fallback: Optional[llm.CompletionProvider] = None
    translator: Optional[bt.TranslationProvider] = None


def _icons_for(o: ont.Ontology, e: Elementalization) -> IdeographIcons:
    sc_icon = o.classes[e.sc].icon if e.sc in o.classes else ont.PLACEHOLDER_ICON
    st_icon = o.templates[e.st].icon if e.st in o.templates else ont.PLACEHOLDER_ICON
    sm_icons = {}
    for _, sms in e.explication:
        for sm in sms:
            mol = o.molecules.get(sm)
            sm_icons[sm] = mol.icon if mol else ont.PLACEHOLDER_ICON
    return IdeographIcons(sc=sc_icon, st=st_icon, sm=sm_icons)


def decompose_word(lemma: str, pos: str, o: ont.Ontology,
                   fb: Optional[llm.CompletionProvider] = None,
                   surface: Optional[str] = None,
                   retries: int = llm.DEFAULT_RETRIES,
                   k_examples: int = llm.DEFAULT_K_EXAMPLES,
                   ) -> Tuple[Elementalization, Optional[ont.ConceptEntry]]:
    """Decompose one word; ontology hit first, provider fallback second.

    Returns the elementalization plus the admitted entry when the fallback
    produced a new concept (caller decides whether to insert it).
    """
    entry = ont.lookup(o, lemma, pos)
    admitted = None
    if entry is None:
        if fb is None:
            raise OovWithoutFallbackError(lemma, pos)
        admitted = llm.infer_entailment(lemma, pos, o, fb,
                                        retries=retries, k_examples=k_examples)
        entry = admitted
    elem = Elementalization(
        cw=surface or lemma,
        sc=entry.sc,
        st=entry.st,
        explication=entry.explication,
    )
    return elem, admitted


def compile_message(raw: str, cfg: PipelineConfig, o: ont.Ontology,
                    providers: Optional[Providers] = None,
                    binding_lang: Optional[str] = None,
                    lexicon: Optional[TagLexicon] = None,
                    lemma_rules: Optional[LemmaRules] = None,
                    now: Optional[str] = None) -> Tuple[NimMessage, ont.Ontology]:
    """Run the whole pipeline and return (message, possibly-updated ontology).

    Deterministic given a fixed ontology snapshot and deterministic
    providers. Admitted OOV concepts are inserted into the returned
    snapshot; with zero OOV words the input snapshot is returned as is.
    """
    providers = providers or Providers()
    binding_lang = binding_lang or cfg.binding_lang
    lexicon = lexicon or load_tag_lexicon()
    lemma_rules = lemma_rules or load_lemma_rules()

    cleaned = clean(raw)
    if not cleaned:
        raise EmptyMessageError("message is empty after cleaning")
    tokens = tokenize(cleaned)
    tagged = tag_and_lemmatize(tokens, lexicon, lemma_rules)
    part = partition(tagged, cfg.partition)

    # decompose each picturable word; on exhausted fallback retries the word
    # degrades to binding text instead of failing the whole message
    elems: Dict[int, Elementalization] = {}
    current = o
    for idx, t, lemma in part.picturable:
        pos = NOUN if t.coarse_pos == NOUN else VERB
        try:
            elem, admitted = decompose_word(
                lemma, pos, current, providers.fallback,
                surface=t.token.surface,
                retries=cfg.retries, k_examples=cfg.k_examples)
        except ExhaustedRetriesError as e:
            warnings.warn(f"fallback failed for {lemma!r}, keeping it as binding text: {e}")
            continue
        if admitted is not None and cfg.admit_oov:
            current = ont.insert_concept(current, admitted)
        elems[idx] = elem

    degraded = set(i for i, _, _ in part.picturable) - set(elems)
    if degraded:
        part = PartitionResult(
            picturable=tuple(x for x in part.picturable if x[0] not in degraded),
            binding=tuple(sorted(
                list(part.binding) + [(i, t) for i, t, _ in part.picturable if i in degraded])),
        )

    placeholdered = bt.insert_placeholders(part, elems)

    if providers.translator is not None and binding_lang != cfg.source_lang:
        translated = bt.translate(placeholdered, binding_lang, providers.translator,
                                  source_lang=cfg.source_lang)
    else:
        translated = placeholdered.text_with_placeholders

    source_positions = {id(payload): n for n, payload in placeholdered.marker_map.items()}
    segments = []
    for kind, payload in bt.realign(translated, placeholdered.marker_map):
        if kind == TEXT:
            segments.append(Segment(kind=TEXT, surface=payload))
        else:
            elem = payload
            segments.append(Segment(
                kind=IDEOGRAPH,
                elem=elem,
                icons=_icons_for(current, elem),
                source_order=source_positions[id(elem)],
            ))

    message = NimMessage(
        source_text=cleaned,
        source_lang=cfg.source_lang,
        binding_lang=binding_lang,
        segments=tuple(segments),
        ontology_version=current.version,
        created_at=now or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    return message, current


def ablation_strip_text(m: NimMessage) -> NimMessage:
    """Drop text segments; ideographs kept in canonical source order."""
    ideographs = [s for s in m.segments if s.kind == IDEOGRAPH]
    if all(s.source_order is not None for s in ideographs):
        ideographs.sort(key=lambda s: s.source_order)
    return replace(m, segments=tuple(ideographs))
