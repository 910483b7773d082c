"""Bit-exact output formats for compiled messages.

Three surfaces: the hierarchical elementalization text, the wire JSON
(schema v1, icon ids inlined so viewers never need ontology access) and a
one-line terminal preview. Everything here is pure; timestamps are carried,
never generated.
"""

from __future__ import annotations

import json
from typing import List

from .decompose import (
    IDEOGRAPH,
    TEXT,
    Elementalization,
    IdeographIcons,
    NimMessage,
    Segment,
)
from .errors import SchemaViolationError

WIRE_VERSION = 1


def _ordered_ideographs(m: NimMessage) -> List[Segment]:
    segs = [s for s in m.segments if s.kind == IDEOGRAPH]
    if all(s.source_order is not None for s in segs):
        segs.sort(key=lambda s: s.source_order)
    return segs


def to_elementalization(m: NimMessage) -> str:
    """Hierarchical text form, complex words in source order.

    Multi-molecule values are joined by ", "; no trailing newline.
    """
    lines = ["<elementalization>"]
    for seg in _ordered_ideographs(m):
        e = seg.elem
        lines.append(f"-<cw>{e.cw.upper()}</cw>")
        lines.append(f"--- <sc>{e.sc}</sc>")
        lines.append(f"--- <st>{e.st}</st>")
        for sv, sms in e.explication:
            lines.append(f"------ <sv>{sv}</sv> <sm>{', '.join(sms)}</sm>")
    lines.append("</elementalization>")
    return "\n".join(lines)


def to_wire_dict(m: NimMessage) -> dict:
    segments = []
    for seg in m.segments:
        if seg.kind == TEXT:
            segments.append({"kind": TEXT, "surface": seg.surface})
        else:
            e = seg.elem
            icons = seg.icons or IdeographIcons("", "", {})
            segments.append({
                "kind": IDEOGRAPH,
                "cw": e.cw,
                "sc": {"id": e.sc, "icon": icons.sc},
                "st": {"id": e.st, "icon": icons.st},
                "explication": [
                    {"sv": sv, "sm": [{"id": sm, "icon": icons.sm.get(sm, "")} for sm in sms]}
                    for sv, sms in e.explication
                ],
            })
    return {
        "version": WIRE_VERSION,
        "source_text": m.source_text,
        "source_lang": m.source_lang,
        "binding_lang": m.binding_lang,
        "ontology_version": m.ontology_version,
        "segments": segments,
    }


def to_wire_json(m: NimMessage) -> bytes:
    """Deterministic UTF-8 JSON: sorted keys, no whitespace."""
    return json.dumps(to_wire_dict(m), ensure_ascii=False, sort_keys=True,
                      separators=(",", ":")).encode("utf-8")


def _require(d: dict, key: str, path: str):
    if not isinstance(d, dict) or key not in d:
        raise SchemaViolationError(f"missing required key {key!r}", f"{path}/{key}")
    return d[key]


def from_wire_json(data) -> NimMessage:
    """Inverse of to_wire_json; raises schema-violation with a JSON pointer."""
    if isinstance(data, (bytes, bytearray)):
        try:
            doc = json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise SchemaViolationError(f"not valid JSON: {e}") from e
    else:
        doc = data
    if not isinstance(doc, dict):
        raise SchemaViolationError("document must be a JSON object")
    version = _require(doc, "version", "")
    if version != WIRE_VERSION:
        raise SchemaViolationError(f"unknown wire version {version!r}", "/version")

    segments = []
    raw_segments = _require(doc, "segments", "")
    if not isinstance(raw_segments, list):
        raise SchemaViolationError("segments must be an array", "/segments")
    for i, s in enumerate(raw_segments):
        path = f"/segments/{i}"
        kind = _require(s, "kind", path)
        if kind == TEXT:
            segments.append(Segment(kind=TEXT, surface=_require(s, "surface", path)))
        elif kind == IDEOGRAPH:
            sc = _require(s, "sc", path)
            st = _require(s, "st", path)
            explication = []
            sm_icons = {}
            raw_expl = _require(s, "explication", path)
            for j, t in enumerate(raw_expl):
                tpath = f"{path}/explication/{j}"
                sv = _require(t, "sv", tpath)
                sms = _require(t, "sm", tpath)
                ids = []
                for k, mol in enumerate(sms):
                    mid = _require(mol, "id", f"{tpath}/sm/{k}")
                    sm_icons[mid] = _require(mol, "icon", f"{tpath}/sm/{k}")
                    ids.append(mid)
                explication.append((sv, tuple(ids)))
            segments.append(Segment(
                kind=IDEOGRAPH,
                elem=Elementalization(
                    cw=_require(s, "cw", path),
                    sc=_require(sc, "id", f"{path}/sc"),
                    st=_require(st, "id", f"{path}/st"),
                    explication=tuple(explication),
                ),
                icons=IdeographIcons(
                    sc=_require(sc, "icon", f"{path}/sc"),
                    st=_require(st, "icon", f"{path}/st"),
                    sm=sm_icons,
                ),
            ))
        else:
            raise SchemaViolationError(f"unknown segment kind {kind!r}", f"{path}/kind")

    return NimMessage(
        source_text=_require(doc, "source_text", ""),
        source_lang=_require(doc, "source_lang", ""),
        binding_lang=_require(doc, "binding_lang", ""),
        segments=tuple(segments),
        ontology_version=_require(doc, "ontology_version", ""),
        created_at=doc.get("created_at", ""),
    )


def render_terminal(m: NimMessage, expand: bool = False) -> str:
    """One line interleaving binding text with [SC:id] boxes.

    With expand=True, per-ideograph explication lines mirroring the
    elementalization depth follow the summary line.
    """
    if not m.segments:
        return ""
    parts = []
    for seg in m.segments:
        if seg.kind == TEXT:
            parts.append(seg.surface)
        else:
            parts.append(f"[SC:{seg.elem.sc}]")
    out = " ".join(parts)
    if expand:
        detail = []
        for seg in _ordered_ideographs(m):
            e = seg.elem
            detail.append(f"-<cw>{e.cw.upper()}</cw>")
            detail.append(f"--- <sc>{e.sc}</sc>")
            detail.append(f"--- <st>{e.st}</st>")
            for sv, sms in e.explication:
                detail.append(f"------ <sv>{sv}</sv> <sm>{', '.join(sms)}</sm>")
        if detail:
            out = out + "\n" + "\n".join(detail)
    return out
