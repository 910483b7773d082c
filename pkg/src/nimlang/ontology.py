"""Versioned store of semantic classes, templates, variables, molecules,
entailment constraints and concept entries.

Snapshots are immutable: every successful mutation returns a new ``Ontology``
with ``version`` bumped by exactly 1. Persistence is a single JSON document
with collections sorted by id so exports diff cleanly.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .errors import (
    DuplicateConceptError,
    OntologyParseError,
    OntologyValidationError,
    UnknownConstraintError,
)

NOUN = "noun"
VERB = "verb"
POS_DOMAINS = (NOUN, VERB)

SEED = "seed"
LLM_ADMITTED = "llm_admitted"
PROVENANCES = (SEED, LLM_ADMITTED)

PLACEHOLDER_ICON = "icon:placeholder"

# lowercase tokens; internal spaces and the characters needed for markers
# like "day(+1)" are allowed
_ID_RE = re.compile(r"^[a-z0-9][a-z0-9 ()+\-]*$")


def is_valid_id(s: str) -> bool:
    return bool(_ID_RE.match(s))


@dataclass(frozen=True)
class SemanticClass:
    id: str
    display_name: str
    pos_domain: str
    icon: str


@dataclass(frozen=True)
class SemanticTemplate:
    id: str
    parent_class: str
    icon: str
    variable_slots: Tuple[str, ...]


@dataclass(frozen=True)
class SemanticVariable:
    id: str
    display_name: str
    # variables deliberately carry no icon: they stay implicit in display


@dataclass(frozen=True)
class SemanticMolecule:
    id: str
    display_name: str
    icon: str


@dataclass(frozen=True)
class EntailmentConstraint:
    template: str
    variable: str
    allowed_molecules: frozenset


# explication: ordered (variable id, ordered molecule ids) pairs; multi-molecule
# values encode ordered paths such as kinship "parent; parent"
Explication = Tuple[Tuple[str, Tuple[str, ...]], ...]


@dataclass(frozen=True)
class ConceptEntry:
    lemma: str
    pos: str
    sc: str
    st: str
    explication: Explication
    provenance: str = SEED
    admitted_at: Optional[str] = None


@dataclass(frozen=True)
class Violation:
    entity_id: str
    rule: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)


@dataclass(frozen=True)
class DomainStats:
    classes: int = 0
    templates: int = 0
    tuples: int = 0
    concepts: int = 0


@dataclass(frozen=True)
class OntologyStats:
    noun: DomainStats
    verb: DomainStats
    ideographs: int

    def as_dict(self) -> dict:
        return {
            "noun": vars(self.noun),
            "verb": vars(self.verb),
            "ideographs": self.ideographs,
        }


@dataclass(frozen=True)
class Ontology:
    version: int = 0
    classes: Mapping[str, SemanticClass] = field(default_factory=dict)
    templates: Mapping[str, SemanticTemplate] = field(default_factory=dict)
    variables: Mapping[str, SemanticVariable] = field(default_factory=dict)
    molecules: Mapping[str, SemanticMolecule] = field(default_factory=dict)
    constraints: Mapping[Tuple[str, str], EntailmentConstraint] = field(default_factory=dict)
    concepts: Mapping[Tuple[str, str], ConceptEntry] = field(default_factory=dict)
    icon_manifest: Mapping[str, str] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, Ontology):
            return NotImplemented
        return canonical_json(self) == canonical_json(other)

    def __hash__(self):
        return hash(canonical_json(self))


# --------------------------------------------------------------------------
# lookup & constrained mutation


def lookup(o: Ontology, lemma: str, pos: str) -> Optional[ConceptEntry]:
    """Exact-match concept lookup; no fuzzy matching."""
    return o.concepts.get((lemma, pos))


def allowed_molecules(o: Ontology, st: str, sv: str) -> frozenset:
    """Molecule ids a variable may take under a template."""
    c = o.constraints.get((st, sv))
    if c is None:
        raise UnknownConstraintError(f"no entailment constraint for ({st}, {sv})")
    return c.allowed_molecules


def _concept_violations(o: Ontology, c: ConceptEntry) -> list:
    out = []
    key = f"concept:{c.lemma}/{c.pos}"
    if not c.lemma or not is_valid_id(c.lemma):
        out.append(Violation(key, "bad-lemma", f"lemma {c.lemma!r} is not a normalized token"))
    if c.pos not in POS_DOMAINS:
        out.append(Violation(key, "bad-pos", f"pos {c.pos!r} not in {POS_DOMAINS}"))
    if c.provenance not in PROVENANCES:
        out.append(Violation(key, "bad-provenance", f"provenance {c.provenance!r}"))
    sc = o.classes.get(c.sc)
    st = o.templates.get(c.st)
    if sc is None:
        out.append(Violation(key, "dangling-sc", f"semantic class {c.sc!r} not found"))
    if st is None:
        out.append(Violation(key, "dangling-st", f"semantic template {c.st!r} not found"))
    if sc is not None and st is not None:
        if st.parent_class != c.sc:
            out.append(Violation(
                key, "st-parent-mismatch",
                f"template {c.st!r} belongs to class {st.parent_class!r}, not {c.sc!r}"))
        if sc.pos_domain != c.pos:
            out.append(Violation(
                key, "pos-class-mismatch",
                f"class {c.sc!r} has pos_domain {sc.pos_domain!r}, concept is {c.pos!r}"))
    if not c.explication:
        out.append(Violation(key, "empty-explication", "explication has no (sv, sm) tuples"))
    seen_sv = set()
    for sv, sms in c.explication:
        if sv in seen_sv:
            out.append(Violation(key, "duplicate-variable", f"variable {sv!r} repeated"))
        seen_sv.add(sv)
        if st is not None and sv not in st.variable_slots:
            out.append(Violation(
                key, "variable-not-in-template",
                f"variable {sv!r} is not a slot of template {c.st!r}"))
        constraint = o.constraints.get((c.st, sv))
        if constraint is None:
            out.append(Violation(
                key, "missing-constraint",
                f"no entailment constraint for ({c.st!r}, {sv!r})"))
            continue
        if not sms:
            out.append(Violation(key, "empty-molecule-value", f"variable {sv!r} has no molecules"))
        for sm in sms:
            if sm not in o.molecules:
                out.append(Violation(key, "dangling-sm", f"molecule {sm!r} not found"))
            elif sm not in constraint.allowed_molecules:
                out.append(Violation(
                    key, "molecule-not-allowed",
                    f"molecule {sm!r} not allowed for variable {sv!r} under template {c.st!r}"))
    if st is not None:
        slot_order = {s: i for i, s in enumerate(st.variable_slots)}
        idx = [slot_order[sv] for sv, _ in c.explication if sv in slot_order]
        if idx != sorted(idx):
            out.append(Violation(
                key, "explication-order",
                "explication order does not follow template variable_slots order"))
    return out


def validate(o: Ontology) -> ValidationReport:
    """Check every invariant; violations are data, not exceptions."""
    out = []

    for cid, sc in o.classes.items():
        key = f"class:{cid}"
        if cid != sc.id or not is_valid_id(cid):
            out.append(Violation(key, "bad-id", f"class id {cid!r}"))
        if sc.pos_domain not in POS_DOMAINS:
            out.append(Violation(key, "bad-pos-domain", f"{sc.pos_domain!r}"))
        if not sc.icon:
            out.append(Violation(key, "missing-icon", "class has no icon"))
        elif sc.icon not in o.icon_manifest:
            out.append(Violation(key, "dangling-icon", f"icon {sc.icon!r} not in manifest"))

    for tid, st in o.templates.items():
        key = f"template:{tid}"
        if tid != st.id or not is_valid_id(tid):
            out.append(Violation(key, "bad-id", f"template id {tid!r}"))
        if st.parent_class not in o.classes:
            out.append(Violation(
                key, "sc-st-relationship",
                f"parent class {st.parent_class!r} not found (R^(sc/st) violation)"))
        if not st.variable_slots:
            out.append(Violation(key, "empty-slots", "template has no variable slots"))
        for sv in st.variable_slots:
            if sv not in o.variables:
                out.append(Violation(key, "dangling-sv", f"slot {sv!r} not a known variable"))
        if not st.icon:
            out.append(Violation(key, "missing-icon", "template has no icon"))
        elif st.icon not in o.icon_manifest:
            out.append(Violation(key, "dangling-icon", f"icon {st.icon!r} not in manifest"))

    for vid, sv in o.variables.items():
        if vid != sv.id or not is_valid_id(vid):
            out.append(Violation(f"variable:{vid}", "bad-id", f"variable id {vid!r}"))

    for mid, sm in o.molecules.items():
        key = f"molecule:{mid}"
        if mid != sm.id or not is_valid_id(mid):
            out.append(Violation(key, "bad-id", f"molecule id {mid!r}"))
        if not sm.icon:
            out.append(Violation(key, "missing-icon", "molecule has no icon"))
        elif sm.icon not in o.icon_manifest:
            out.append(Violation(key, "dangling-icon", f"icon {sm.icon!r} not in manifest"))

    for (tid, vid), c in o.constraints.items():
        key = f"constraint:{tid}/{vid}"
        if (tid, vid) != (c.template, c.variable):
            out.append(Violation(key, "bad-key", "constraint stored under wrong key"))
        st = o.templates.get(tid)
        if st is None:
            out.append(Violation(
                key, "st-e-relationship",
                f"template {tid!r} not found (R^(st/e) violation)"))
        elif vid not in st.variable_slots:
            out.append(Violation(
                key, "variable-not-in-slots",
                f"variable {vid!r} is not a slot of template {tid!r}"))
        if vid not in o.variables:
            out.append(Violation(key, "dangling-sv", f"variable {vid!r} not found"))
        if not c.allowed_molecules:
            out.append(Violation(key, "empty-allowed-set", "constraint allows no molecules"))
        for sm in c.allowed_molecules:
            if sm not in o.molecules:
                out.append(Violation(key, "dangling-sm", f"molecule {sm!r} not found"))

    for (lemma, pos), c in o.concepts.items():
        if (lemma, pos) != (c.lemma, c.pos):
            out.append(Violation(
                f"concept:{lemma}/{pos}", "bad-key", "concept stored under wrong key"))
        out.extend(_concept_violations(o, c))

    return ValidationReport(tuple(out))


def insert_concept(o: Ontology, c: ConceptEntry) -> Ontology:
    """Return a new snapshot with ``c`` added and version bumped by 1.

    Rejected inserts raise and leave ``o`` untouched (snapshots are
    immutable, so there is nothing to roll back).
    """
    if (c.lemma, c.pos) in o.concepts:
        raise DuplicateConceptError(f"concept ({c.lemma!r}, {c.pos!r}) already present")
    violations = _concept_violations(o, c)
    if violations:
        raise OntologyValidationError(violations)
    concepts = dict(o.concepts)
    concepts[(c.lemma, c.pos)] = c
    return replace(o, version=o.version + 1, concepts=concepts)


def stats(o: Ontology) -> OntologyStats:
    """Counts split by pos_domain; tuples count (sv, sm) allowed pairs."""
    per = {NOUN: [0, 0, 0, 0], VERB: [0, 0, 0, 0]}  # classes, templates, tuples, concepts
    for sc in o.classes.values():
        if sc.pos_domain in per:
            per[sc.pos_domain][0] += 1
    tmpl_domain = {}
    for st in o.templates.values():
        dom = o.classes[st.parent_class].pos_domain if st.parent_class in o.classes else None
        tmpl_domain[st.id] = dom
        if dom in per:
            per[dom][1] += 1
    for (tid, _), c in o.constraints.items():
        dom = tmpl_domain.get(tid)
        if dom in per:
            per[dom][2] += len(c.allowed_molecules)
    for c in o.concepts.values():
        if c.pos in per:
            per[c.pos][3] += 1
    icons = set()
    for sc in o.classes.values():
        icons.add(sc.icon)
    for st in o.templates.values():
        icons.add(st.icon)
    for sm in o.molecules.values():
        icons.add(sm.icon)
    icons.discard("")
    return OntologyStats(
        noun=DomainStats(*per[NOUN]),
        verb=DomainStats(*per[VERB]),
        ideographs=len(icons),
    )


# --------------------------------------------------------------------------
# JSON persistence


def concept_to_dict(c: ConceptEntry) -> dict:
    d = {
        "lemma": c.lemma,
        "pos": c.pos,
        "sc": c.sc,
        "st": c.st,
        "explication": [{"sv": sv, "sm": list(sms)} for sv, sms in c.explication],
        "provenance": c.provenance,
    }
    if c.admitted_at is not None:
        d["admitted_at"] = c.admitted_at
    return d


def concept_from_dict(d: dict) -> ConceptEntry:
    try:
        explication = tuple(
            (t["sv"], tuple(t["sm"]) if isinstance(t["sm"], list) else (t["sm"],))
            for t in d["explication"]
        )
        return ConceptEntry(
            lemma=d["lemma"],
            pos=d["pos"],
            sc=d["sc"],
            st=d["st"],
            explication=explication,
            provenance=d.get("provenance", SEED),
            admitted_at=d.get("admitted_at"),
        )
    except (KeyError, TypeError) as e:
        raise OntologyParseError(f"malformed concept record: {e}") from e


def to_document(o: Ontology) -> dict:
    return {
        "version": o.version,
        "classes": [
            {"id": c.id, "display_name": c.display_name, "pos_domain": c.pos_domain, "icon": c.icon}
            for c in sorted(o.classes.values(), key=lambda c: c.id)
        ],
        "templates": [
            {"id": t.id, "parent_class": t.parent_class, "icon": t.icon,
             "variable_slots": list(t.variable_slots)}
            for t in sorted(o.templates.values(), key=lambda t: t.id)
        ],
        "variables": [
            {"id": v.id, "display_name": v.display_name}
            for v in sorted(o.variables.values(), key=lambda v: v.id)
        ],
        "molecules": [
            {"id": m.id, "display_name": m.display_name, "icon": m.icon}
            for m in sorted(o.molecules.values(), key=lambda m: m.id)
        ],
        "constraints": [
            {"template": c.template, "variable": c.variable,
             "allowed_molecules": sorted(c.allowed_molecules)}
            for c in sorted(o.constraints.values(), key=lambda c: (c.template, c.variable))
        ],
        "concepts": [
            concept_to_dict(c)
            for c in sorted(o.concepts.values(), key=lambda c: (c.lemma, c.pos))
        ],
        "icon_manifest": {k: o.icon_manifest[k] for k in sorted(o.icon_manifest)},
    }


def canonical_json(o: Ontology) -> str:
    return json.dumps(to_document(o), ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def from_document(doc: dict) -> Ontology:
    try:
        classes = {
            c["id"]: SemanticClass(c["id"], c["display_name"], c["pos_domain"], c["icon"])
            for c in doc.get("classes", [])
        }
        templates = {
            t["id"]: SemanticTemplate(
                t["id"], t["parent_class"], t["icon"], tuple(t["variable_slots"]))
            for t in doc.get("templates", [])
        }
        variables = {
            v["id"]: SemanticVariable(v["id"], v["display_name"])
            for v in doc.get("variables", [])
        }
        molecules = {
            m["id"]: SemanticMolecule(m["id"], m["display_name"], m["icon"])
            for m in doc.get("molecules", [])
        }
        constraints = {
            (c["template"], c["variable"]): EntailmentConstraint(
                c["template"], c["variable"], frozenset(c["allowed_molecules"]))
            for c in doc.get("constraints", [])
        }
        concepts = {}
        for d in doc.get("concepts", []):
            c = concept_from_dict(d)
            if (c.lemma, c.pos) in concepts:
                raise OntologyParseError(f"duplicate concept ({c.lemma!r}, {c.pos!r})")
            concepts[(c.lemma, c.pos)] = c
        return Ontology(
            version=int(doc.get("version", 0)),
            classes=classes,
            templates=templates,
            variables=variables,
            molecules=molecules,
            constraints=constraints,
            concepts=concepts,
            icon_manifest=dict(doc.get("icon_manifest", {})),
        )
    except OntologyParseError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise OntologyParseError(f"malformed ontology document: {e}") from e


def load_ontology(path) -> Ontology:
    """Load and validate an ontology JSON document."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as e:
        raise OntologyParseError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise OntologyParseError(f"invalid JSON in {path}: {e}") from e
    if not isinstance(doc, dict):
        raise OntologyParseError("ontology document must be a JSON object")
    o = from_document(doc)
    report = validate(o)
    if not report.ok:
        raise OntologyValidationError(report.violations)
    return o


def save_ontology(o: Ontology, path) -> None:
    """Write canonical JSON via temp file + atomic rename."""
    path = os.fspath(path)
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(prefix=".ontology-", suffix=".json", dir=d)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(canonical_json(o))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
