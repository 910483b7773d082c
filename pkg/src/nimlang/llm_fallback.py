"""Two-stage prompt protocol for out-of-vocabulary concepts.

Stage 1 asks for the (SC, ST) pair, stage 2 for the (SV, SM) tuples under
the identified template. Every response is validated against the ontology's
entailment constraints; on violation the prompt is retried with the
violations appended to its instructions. Nothing reaches the ontology
without passing the same rules as hand-authored entries.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import List, Optional, Protocol, Sequence, Tuple

from . import ontology as ont
from .errors import (
    ExhaustedRetriesError,
    InsufficientExamplesError,
    MalformedResponseError,
    ProviderUnreachableError,
    TranscriptMissError,
    UnknownTemplateError,
)

STAGE_SC_ST = "sc_st"
STAGE_SV_SM = "sv_sm"

DEFAULT_K_EXAMPLES = 5
DEFAULT_RETRIES = 2


@dataclass(frozen=True)
class Prompt:
    context: str
    instructions: str
    examples: Tuple[Tuple[str, str], ...]
    rendered: str


@dataclass
class CandidateEntailment:
    """Unvalidated provider output kept for audit."""

    lemma: str
    sc: str = ""
    st: str = ""
    tuples: List[Tuple[str, Tuple[str, ...]]] = field(default_factory=list)
    raw_responses: List[str] = field(default_factory=list)


class CompletionProvider(Protocol):
    def complete(self, prompt: str, *, max_tokens: int = 256,
                 temperature: float = 0.0) -> str: ...


# --------------------------------------------------------------------------
# prompt construction

def _seed_for(lemma: str) -> int:
    return int.from_bytes(hashlib.sha256(lemma.encode("utf-8")).digest()[:8], "big")


def _render(context: str, examples_block: str, instructions: str) -> str:
    return f"{context}\n\n{examples_block}\n\n{instructions}"


def build_prompt_sc_st(lemma: str, o: ont.Ontology, k_examples: int = DEFAULT_K_EXAMPLES,
                       pos: str = ont.NOUN, extra_instructions: str = "") -> Prompt:
    """Few-shot prompt asking for the two-level (SC, ST) breakdown."""
    if k_examples < 1:
        raise InsufficientExamplesError("few-shot examples are mandatory (k_examples >= 1)")
    pool = sorted(
        c.lemma for c in o.concepts.values() if c.pos == pos and c.lemma != lemma)
    if len(pool) < k_examples:
        raise InsufficientExamplesError(
            f"ontology has {len(pool)} {pos} concepts, need {k_examples} examples")
    rng = random.Random(_seed_for(lemma))
    chosen = rng.sample(pool, k_examples)
    examples = []
    for ex_lemma in chosen:
        entry = ont.lookup(o, ex_lemma, pos)
        payload = json.dumps({"SC": entry.sc, "ST": entry.st})
        examples.append((ex_lemma, payload))

    context = (
        "Imagine the human annotator has been given the task to hierarchically "
        "break down a word into 2 levels. Level 1 considers of broad category "
        "of word and is referred as SC. Level 2 considers of narrow category "
        "of word and is referred as ST."
    )
    examples_block = "Now considering the examples as illustrated:\n" + "\n".join(
        f'Word "{w}" -> {payload}' for w, payload in examples)
    instructions = (
        f'Use your inferencing to find the SC and ST for the word "{lemma}". '
        'Respond with a single JSON object of the form {"SC": "...", "ST": "..."} '
        "and nothing else."
    )
    if extra_instructions:
        instructions += "\n" + extra_instructions
    return Prompt(context, instructions, tuple(examples),
                  _render(context, examples_block, instructions))


def build_prompt_svsm(lemma: str, st: str, o: ont.Ontology,
                      extra_instructions: str = "") -> Prompt:
    """Constraint-enumerating prompt asking for Key/Value tuples."""
    template = o.templates.get(st)
    if template is None:
        raise UnknownTemplateError(f"unknown semantic template {st!r}")
    combos = []
    all_molecules = set()
    for sv in template.variable_slots:
        constraint = o.constraints.get((st, sv))
        if constraint is None:
            continue
        allowed = sorted(constraint.allowed_molecules)
        all_molecules.update(allowed)
        combos.append((sv, allowed))
    if not combos:
        raise UnknownTemplateError(f"template {st!r} has no entailment constraints")

    peer_examples = []
    for c in sorted(o.concepts.values(), key=lambda c: c.lemma):
        if c.st == st and c.lemma != lemma:
            kv = {}
            for i, (sv, sms) in enumerate(c.explication, start=1):
                kv[f"Key{i}"] = sv
                kv[f"Value{i}"] = "; ".join(sms)
            peer_examples.append((c.lemma, json.dumps(kv)))

    context = (
        "Imagine the human annotator has been given the task to explain the "
        f'semantic meaning of the word "{lemma}", using Key-Value pairs. '
        "Keys to be considered should be from the predefined set of values: "
        + ", ".join(sv for sv, _ in combos) + ". "
        "Values considered should be of a predefined set of values: "
        + ", ".join(sorted(all_molecules)) + ". "
        "Each semantic variable can only take limited values from semantic "
        "molecule sets as illustrated: "
        + "; ".join(f"{sv} -> {{{', '.join(allowed)}}}" for sv, allowed in combos) + "."
    )
    examples_block = "Now considering the examples and constraints as illustrated:\n" + "\n".join(
        f'Word "{w}" -> {payload}' for w, payload in peer_examples)
    instructions = (
        "Use your inferencing to find the Key-Value pairs for the word "
        f'"{lemma}". When there are multiple Key-Value pairs, use Key1,Value1, '
        "Key2,Value2 in your response, as a single JSON object and nothing else."
    )
    if extra_instructions:
        instructions += "\n" + extra_instructions
    return Prompt(context, instructions, tuple(peer_examples),
                  _render(context, examples_block, instructions))


def retry_instructions(violations: Sequence[str]) -> str:
    return ("Previous attempt was invalid: " + "; ".join(violations)
            + ". Follow the constraints exactly and try again.")


# --------------------------------------------------------------------------
# response parsing

def _first_json_object(raw: str) -> Optional[dict]:
    depth = 0
    start = None
    for i, ch in enumerate(raw):
        if ch == "{":
            if depth == 0:
                start = i
            depth += 1
        elif ch == "}" and depth > 0:
            depth -= 1
            if depth == 0:
                try:
                    obj = json.loads(raw[start:i + 1])
                except json.JSONDecodeError:
                    start = None
                    continue
                if isinstance(obj, dict):
                    return obj
                start = None
    return None


def _norm_value(v) -> str:
    return str(v).strip().lower()


def parse_response(raw: str, stage: str):
    """Extract the first well-formed JSON object and the stage's fields.

    sc_st returns (sc, st); sv_sm returns an ordered list of
    (key, molecule tuple) pairs, splitting multi-molecule values on ';'.
    """
    obj = _first_json_object(raw)
    if obj is None:
        raise MalformedResponseError(f"no JSON object found in response: {raw[:120]!r}")
    lowered = {str(k).strip().lower(): v for k, v in obj.items()}
    if stage == STAGE_SC_ST:
        if "sc" not in lowered or "st" not in lowered:
            raise MalformedResponseError("response missing SC or ST key")
        return _norm_value(lowered["sc"]), _norm_value(lowered["st"])
    if stage == STAGE_SV_SM:
        tuples = []
        i = 1
        while f"key{i}" in lowered:
            if f"value{i}" not in lowered:
                raise MalformedResponseError(f"Key{i} present without Value{i}")
            key = _norm_value(lowered[f"key{i}"])
            value = _norm_value(lowered[f"value{i}"])
            molecules = tuple(p.strip() for p in value.split(";") if p.strip())
            if not molecules:
                raise MalformedResponseError(f"Value{i} is empty")
            tuples.append((key, molecules))
            i += 1
        if not tuples:
            raise MalformedResponseError("response contains no Key1/Value1 pair")
        return tuples
    raise ValueError(f"unknown stage {stage!r}")


# --------------------------------------------------------------------------
# chained inference with validation-retry

def _validate_sc_st(o: ont.Ontology, pos: str, sc: str, st: str) -> List[str]:
    violations = []
    klass = o.classes.get(sc)
    template = o.templates.get(st)
    if klass is None:
        violations.append(f"unknown semantic class {sc!r}")
    elif klass.pos_domain != pos:
        violations.append(f"class {sc!r} is for {klass.pos_domain}s, word is a {pos}")
    if template is None:
        violations.append(f"unknown semantic template {st!r}")
    elif klass is not None and template.parent_class != sc:
        violations.append(f"template {st!r} does not belong to class {sc!r}")
    return violations


def _validate_tuples(o: ont.Ontology, st: str,
                     tuples: Sequence[Tuple[str, Tuple[str, ...]]]) -> List[str]:
    violations = []
    template = o.templates[st]
    seen = set()
    for sv, sms in tuples:
        if sv in seen:
            violations.append(f"variable {sv!r} repeated")
        seen.add(sv)
        if sv not in template.variable_slots:
            violations.append(f"variable {sv!r} is not a slot of template {st!r}")
            continue
        constraint = o.constraints.get((st, sv))
        allowed = constraint.allowed_molecules if constraint else frozenset()
        for sm in sms:
            if sm not in allowed:
                violations.append(
                    f"molecule {sm!r} not allowed for variable {sv!r} under template {st!r}")
    return violations


def infer_entailment(lemma: str, pos: str, o: ont.Ontology,
                     provider: CompletionProvider,
                     retries: int = DEFAULT_RETRIES,
                     k_examples: int = DEFAULT_K_EXAMPLES,
                     audit: Optional[List[CandidateEntailment]] = None,
                     now: Optional[str] = None) -> ont.ConceptEntry:
    """Chain P1 -> P2 against the provider and return a validated entry.

    Each stage is retried up to ``retries`` extra times with the previous
    violations appended to the instructions.
    """
    candidate = CandidateEntailment(lemma=lemma)
    if audit is not None:
        audit.append(candidate)

    sc = st = None
    violations: List[str] = []
    for attempt in range(retries + 1):
        extra = retry_instructions(violations) if violations else ""
        prompt = build_prompt_sc_st(lemma, o, k_examples, pos=pos, extra_instructions=extra)
        raw = provider.complete(prompt.rendered)
        candidate.raw_responses.append(raw)
        try:
            sc, st = parse_response(raw, STAGE_SC_ST)
        except MalformedResponseError as e:
            violations = [str(e)]
            sc = st = None
            continue
        candidate.sc, candidate.st = sc, st
        violations = _validate_sc_st(o, pos, sc, st)
        if not violations:
            break
        sc = st = None
    if sc is None:
        raise ExhaustedRetriesError(lemma, violations)

    tuples = None
    violations = []
    for attempt in range(retries + 1):
        extra = retry_instructions(violations) if violations else ""
        prompt = build_prompt_svsm(lemma, st, o, extra_instructions=extra)
        raw = provider.complete(prompt.rendered)
        candidate.raw_responses.append(raw)
        try:
            tuples = parse_response(raw, STAGE_SV_SM)
        except MalformedResponseError as e:
            violations = [str(e)]
            tuples = None
            continue
        candidate.tuples = list(tuples)
        violations = _validate_tuples(o, st, tuples)
        if not violations:
            break
        tuples = None
    if tuples is None:
        raise ExhaustedRetriesError(lemma, violations)

    # canonicalize tuple order to the template's slot order
    slot_order = {s: i for i, s in enumerate(o.templates[st].variable_slots)}
    explication = tuple(sorted(tuples, key=lambda t: slot_order[t[0]]))
    return ont.ConceptEntry(
        lemma=lemma,
        pos=pos,
        sc=sc,
        st=st,
        explication=explication,
        provenance=ont.LLM_ADMITTED,
        admitted_at=now or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


# --------------------------------------------------------------------------
# providers

def prompt_sha256(prompt_text: str) -> str:
    return hashlib.sha256(prompt_text.encode("utf-8")).hexdigest()


class TranscriptReplayProvider:
    """Offline provider replaying recorded responses keyed by prompt hash."""

    def __init__(self, entries=None):
        self._responses = {}
        self.calls = 0
        for e in entries or []:
            self._responses[e["prompt_sha256"]] = e["response"]

    @classmethod
    def from_file(cls, path) -> "TranscriptReplayProvider":
        with open(path, encoding="utf-8") as f:
            return cls(json.load(f))

    def add(self, prompt_text: str, response: str) -> None:
        self._responses[prompt_sha256(prompt_text)] = response

    def complete(self, prompt: str, *, max_tokens: int = 256,
                 temperature: float = 0.0) -> str:
        self.calls += 1
        key = prompt_sha256(prompt)
        if key not in self._responses:
            raise TranscriptMissError(f"no recorded response for prompt hash {key[:12]}")
        return self._responses[key]


class HttpCompletionProvider:
    """POST {prompt, max_tokens, temperature} -> {text}."""

    def __init__(self, endpoint: str, token_env: str = "NIM_PROVIDER_TOKEN",
                 timeout: float = 30.0):
        self.endpoint = endpoint
        self.token_env = token_env
        self.timeout = timeout
        self.calls = 0

    def complete(self, prompt: str, *, max_tokens: int = 256,
                 temperature: float = 0.0) -> str:
        import requests

        self.calls += 1
        headers = {}
        token = os.environ.get(self.token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        try:
            resp = requests.post(
                self.endpoint,
                json={"prompt": prompt, "max_tokens": max_tokens, "temperature": temperature},
                headers=headers,
                timeout=self.timeout,
            )
            resp.raise_for_status()
            return resp.json()["text"]
        except (OSError, ValueError, KeyError) as e:
            raise ProviderUnreachableError(f"completion provider failed: {e}") from e
        except Exception as e:  # requests.RequestException
            raise ProviderUnreachableError(f"completion provider failed: {e}") from e
