"""Evaluation harness: METEOR similarity, per-day comprehensibility,
learning-curve rate with the plateau weight, MIA ideograph-effectiveness
indices and an optional embedding-provider STS score.
"""

from __future__ import annotations

import csv
import itertools
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, Iterable, List, Mapping, Optional, Protocol, Sequence, Set, Tuple

from .errors import (
    CsvFormatError,
    EmptyInputError,
    NoRecordsForDayError,
    ProviderUnreachableError,
    UndefinedBaselineError,
)

DEFAULT_LCR_THRESHOLD = 0.9

_WORD_RE = re.compile(r"[a-z0-9']+")

# cap on alignment permutations explored when minimizing chunks; above it a
# deterministic greedy assignment is used instead
_MAX_ALIGNMENTS = 10000


@dataclass(frozen=True)
class EvalRecord:
    participant_id: str
    day: int
    message_id: str
    interpretation: str
    reference: str


@dataclass(frozen=True)
class MiaResponse:
    item_id: str
    association: str  # valid | invalid | missing
    certainty: float  # 0..10
    suitability: float  # 0..10

    def __post_init__(self):
        if self.association not in ("valid", "invalid", "missing"):
            raise ValueError(f"bad association {self.association!r}")
        if not (0 <= self.certainty <= 10) or not (0 <= self.suitability <= 10):
            raise ValueError("ratings must be within 0..10")


@dataclass(frozen=True)
class MiaScores:
    hr: float
    far: float
    ma: float
    sc: float
    ss: float

    def as_dict(self) -> dict:
        return {"hr": self.hr, "far": self.far, "ma": self.ma, "sc": self.sc, "ss": self.ss}


def _light_stem(word: str) -> str:
    """Suffix stripper shared in spirit with the lemmatizer; metric-internal."""
    w = word
    for suf in ("ing", "ed", "es", "s"):
        if len(w) > len(suf) + 2 and w.endswith(suf):
            w = w[: -len(suf)]
            break
    return w


class MatchResources:
    """Stemmer and flat synonym table backing the fuzzy match stages."""

    def __init__(self, synonyms=None, stem=None):
        self.synonyms = dict(synonyms or {})
        self.stem = stem or _light_stem

    def are_synonyms(self, a: str, b: str) -> bool:
        return b in self.synonyms.get(a, ()) or a in self.synonyms.get(b, ())


def load_synonyms(path=None) -> Dict[str, frozenset]:
    """Flat synonym table: word<TAB>comma-separated synonyms."""
    if path is None:
        text = resources.files("nimlang.data").joinpath("synonyms.tsv").read_text("utf-8")
    else:
        text = open(path, encoding="utf-8").read()
    table: Dict[str, set] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, rest = line.partition("\t")
        table.setdefault(word, set()).update(
            s.strip() for s in rest.split(",") if s.strip())
    return {k: frozenset(v) for k, v in table.items()}


def default_resources() -> MatchResources:
    return MatchResources(synonyms=load_synonyms())


def _tokens(text: str) -> List[str]:
    return _WORD_RE.findall(text.lower())


def _match_stage(c: str, r: str, res: MatchResources, stage: int) -> bool:
    if stage == 0:
        return c == r
    if stage == 1:
        return res.stem(c) == res.stem(r)
    return res.are_synonyms(c, r)


def _stage_assignments(cand, ref, res):
    """Greedy staged matching: exact, then stem, then synonym.

    Returns per-candidate-position lists of permissible reference positions
    (all positions its matched stage allows among the refs free at that
    stage), so chunk minimization can later pick among equivalent pairings.
    """
    cand_free = set(range(len(cand)))
    ref_free = set(range(len(ref)))
    options: Dict[int, List[int]] = {}
    for stage in (0, 1, 2):
        # bipartite greedy by candidate order; deterministic
        matched_pairs = []
        taken = set()
        for i in sorted(cand_free):
            for j in sorted(ref_free - taken):
                if _match_stage(cand[i], ref[j], res, stage):
                    matched_pairs.append((i, j))
                    taken.add(j)
                    break
        stage_ref_pool = sorted(taken)
        for i, _ in matched_pairs:
            options[i] = [j for j in stage_ref_pool
                          if _match_stage(cand[i], ref[j], res, stage)]
            cand_free.discard(i)
        ref_free -= taken
    return options


def _chunks(pairs: Sequence[Tuple[int, int]]) -> int:
    """Runs of consecutive candidate matches whose reference positions form
    a contiguous block (order within the block free)."""
    if not pairs:
        return 0
    pairs = sorted(pairs)
    chunks = 1
    run: Set[int] = {pairs[0][1]}
    prev_i = pairs[0][0]
    for i, j in pairs[1:]:
        candidate_run = run | {j}
        contiguous = (max(candidate_run) - min(candidate_run) + 1) == len(candidate_run)
        if i == prev_i + 1 and contiguous:
            run = candidate_run
        else:
            chunks += 1
            run = {j}
        prev_i = i
    return chunks


def _min_chunks(options: Mapping[int, List[int]]) -> int:
    """Minimum chunk count over bijections consistent with the stage match."""
    cand_positions = sorted(options)
    total = 1
    for i in cand_positions:
        total *= max(1, len(options[i]))
        if total > _MAX_ALIGNMENTS:
            break
    if total > _MAX_ALIGNMENTS:
        # fall back: greedy leftmost assignment
        used = set()
        pairs = []
        for i in cand_positions:
            for j in options[i]:
                if j not in used:
                    pairs.append((i, j))
                    used.add(j)
                    break
        return _chunks(pairs)

    best = math.inf
    used: Set[int] = set()
    pairs: List[Tuple[int, int]] = []

    def rec(k: int):
        nonlocal best
        if k == len(cand_positions):
            best = min(best, _chunks(pairs))
            return
        i = cand_positions[k]
        for j in options[i]:
            if j in used:
                continue
            used.add(j)
            pairs.append((i, j))
            rec(k + 1)
            pairs.pop()
            used.discard(j)

    rec(0)
    return int(best) if best is not math.inf else 0


def meteor(candidate: str, reference: str,
           res: Optional[MatchResources] = None) -> float:
    """Unigram-alignment score with fragmentation penalty.

    Staged matching (exact, stem, synonym); F = 10PR / (R + 9P);
    penalty = 0.5 * (chunks / matches)^3, forced to 0 when a single chunk
    covers the whole candidate so identical sentences score exactly 1.
    """
    res = res or MatchResources()
    cand = _tokens(candidate)
    ref = _tokens(reference)
    if not cand or not ref:
        return 0.0
    options = _stage_assignments(cand, ref, res)
    m = len(options)
    if m == 0:
        return 0.0
    p = m / len(cand)
    r = m / len(ref)
    f = 10 * p * r / (r + 9 * p)
    chunks = _min_chunks(options)
    if chunks == 1 and m == len(cand):
        penalty = 0.0
    else:
        penalty = 0.5 * (chunks / m) ** 3
    return f * (1.0 - penalty)


# --------------------------------------------------------------------------
# aggregation

def comprehensibility(records: Sequence[EvalRecord], day: int,
                      res: Optional[MatchResources] = None) -> float:
    """Mean over participants of their mean METEOR for the given day."""
    by_participant: Dict[str, List[float]] = {}
    for rec in records:
        if rec.day == day:
            score = meteor(rec.interpretation, rec.reference, res)
            by_participant.setdefault(rec.participant_id, []).append(score)
    if not by_participant:
        raise NoRecordsForDayError(f"no records for day {day}")
    means = [sum(v) / len(v) for _, v in sorted(by_participant.items())]
    return sum(means) / len(means)


def lcr(c1: float, c5: float, t: float = DEFAULT_LCR_THRESHOLD) -> float:
    """Learning curve rate ((c5-c1)/c1) * (1 - |c5-T|/T)."""
    if c1 <= 0:
        raise UndefinedBaselineError("day-1 comprehensibility must be > 0")
    if t <= 0:
        raise UndefinedBaselineError("threshold must be > 0")
    return ((c5 - c1) / c1) * (1.0 - abs(c5 - t) / t)


def mia(responses: Sequence[MiaResponse]) -> MiaScores:
    """Hit rate, false-alarm rate, missing rate, certainty, suitability."""
    if not responses:
        raise EmptyInputError("no questionnaire responses")
    n = len(responses)
    valid = sum(1 for r in responses if r.association == "valid")
    invalid = sum(1 for r in responses if r.association == "invalid")
    missing = sum(1 for r in responses if r.association == "missing")
    return MiaScores(
        hr=valid / n,
        far=invalid / n,
        ma=missing / n,
        sc=sum(r.certainty for r in responses) / (10 * n),
        ss=sum(r.suitability for r in responses) / (10 * n),
    )


# --------------------------------------------------------------------------
# STS via external embedding provider

class EmbeddingProvider(Protocol):
    def embed(self, texts: Sequence[str]) -> List[List[float]]: ...


class ReplayEmbeddingProvider:
    """Vector-replay mock: text -> stored vector."""

    def __init__(self, table: Mapping[str, Sequence[float]]):
        self.table = {k: list(v) for k, v in table.items()}

    def embed(self, texts: Sequence[str]) -> List[List[float]]:
        try:
            return [list(self.table[t]) for t in texts]
        except KeyError as e:
            raise ProviderUnreachableError(f"no stored vector for {e}") from e


class HttpEmbeddingProvider:
    """POST {texts: [...]} -> {vectors: [[...]]}."""

    def __init__(self, endpoint: str, timeout: float = 30.0):
        self.endpoint = endpoint
        self.timeout = timeout

    def embed(self, texts: Sequence[str]) -> List[List[float]]:
        import requests

        try:
            resp = requests.post(self.endpoint, json={"texts": list(texts)},
                                 timeout=self.timeout)
            resp.raise_for_status()
            return resp.json()["vectors"]
        except (OSError, ValueError, KeyError) as e:
            raise ProviderUnreachableError(f"embedding provider failed: {e}") from e
        except Exception as e:  # requests.RequestException
            raise ProviderUnreachableError(f"embedding provider failed: {e}") from e


def sts_score(candidate: str, reference: str, provider: EmbeddingProvider) -> float:
    """Cosine similarity of provider embeddings, in [-1, 1]."""
    va, vb = provider.embed([candidate, reference])
    dot = sum(a * b for a, b in zip(va, vb))
    na = math.sqrt(sum(a * a for a in va))
    nb = math.sqrt(sum(b * b for b in vb))
    if na == 0 or nb == 0:
        return 0.0
    return dot / (na * nb)


# --------------------------------------------------------------------------
# CSV fixtures

def eval_records_from_csv(path) -> List[EvalRecord]:
    """participant_id,day,message_id,interpretation,reference"""
    out = []
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            required = {"participant_id", "day", "message_id", "interpretation", "reference"}
            if reader.fieldnames is None or not required.issubset(reader.fieldnames):
                raise CsvFormatError(f"expected columns {sorted(required)}")
            seen = set()
            for row in reader:
                key = (row["participant_id"], row["day"], row["message_id"])
                if key in seen:
                    raise CsvFormatError(f"duplicate (participant, day, message): {key}")
                seen.add(key)
                out.append(EvalRecord(
                    participant_id=row["participant_id"],
                    day=int(row["day"]),
                    message_id=row["message_id"],
                    interpretation=row["interpretation"],
                    reference=row["reference"],
                ))
    except (OSError, ValueError) as e:
        raise CsvFormatError(f"cannot read eval records from {path}: {e}") from e
    return out


def mia_responses_from_csv(path) -> List[MiaResponse]:
    """item_id,association,certainty,suitability"""
    out = []
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            required = {"item_id", "association", "certainty", "suitability"}
            if reader.fieldnames is None or not required.issubset(reader.fieldnames):
                raise CsvFormatError(f"expected columns {sorted(required)}")
            for row in reader:
                out.append(MiaResponse(
                    item_id=row["item_id"],
                    association=row["association"],
                    certainty=float(row["certainty"]),
                    suitability=float(row["suitability"]),
                ))
    except (OSError, ValueError) as e:
        raise CsvFormatError(f"cannot read MIA responses from {path}: {e}") from e
    return out


def make_mia_fixture(n_valid: int, n_invalid: int, n_missing: int,
                     certainty: float, suitability: float) -> List[MiaResponse]:
    """Synthetic questionnaire with exact association counts and flat ratings."""
    out = []
    i = 0
    for assoc, n in (("valid", n_valid), ("invalid", n_invalid), ("missing", n_missing)):
        for _ in range(n):
            out.append(MiaResponse(f"item{i:04d}", assoc, certainty, suitability))
            i += 1
    return out


def column_stats(values: Sequence[float]) -> Tuple[float, float]:
    """(mean, population standard deviation) for survey-style columns."""
    if not values:
        raise EmptyInputError("no values")
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(var)
