"""JSONL corpus interchange: one document object per line.

Schema per line:

    {"doc_id": str, "domain": str, "text": str,
     "mentions": [{"start": int, "end": int, "type": str, "source": str}, ...],
     "clusters": [[mention index, ...], ...],
     "entity_links": [[mention index, entity id], ...]}   # optional

Mention surfaces are not stored (they are slices of the text by invariant),
so the round-trip is lossless. ``source`` may be omitted; it then defaults
to ``coref_only`` for type ``None`` and ``concept_extractor`` otherwise.
"""

from __future__ import annotations

import json
from typing import Iterable

from .errors import ParseError
from .model import (
    ConceptType,
    CoreferenceCluster,
    Corpus,
    Document,
    Mention,
    MentionSource,
    concept_type_from_string,
)

__all__ = ["write_jsonl", "read_jsonl", "document_to_dict", "document_from_dict"]

_SOURCES = {s.value: s for s in MentionSource}


def document_to_dict(doc: Document) -> dict:
    index = {m: i for i, m in enumerate(doc.mentions)}
    out: dict = {
        "doc_id": doc.doc_id,
        "domain": doc.domain,
        "text": doc.text,
        "mentions": [
            {"start": m.start, "end": m.end, "type": m.concept_type.value, "source": m.source.value}
            for m in doc.mentions
        ],
        "clusters": sorted(sorted(index[m] for m in c.mentions) for c in doc.clusters),
    }
    if doc.entity_links:
        out["entity_links"] = sorted([index[m], e] for m, e in doc.entity_links.items())
    return out


def write_jsonl(corpus: Corpus) -> str:
    lines = [
        json.dumps(document_to_dict(doc), ensure_ascii=False, sort_keys=True) for doc in corpus
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def _expect(obj: dict, field: str, kind, lineno: int):
    if field not in obj:
        raise ParseError(f"missing field {field!r}", lineno)
    value = obj[field]
    if not isinstance(value, kind):
        raise ParseError(f"field {field!r} has wrong type {type(value).__name__}", lineno)
    return value


def document_from_dict(obj: dict, lineno: int = 0) -> Document:
    doc_id = _expect(obj, "doc_id", str, lineno)
    domain = _expect(obj, "domain", str, lineno)
    text = _expect(obj, "text", str, lineno)

    mentions: list[Mention] = []
    for entry in _expect(obj, "mentions", list, lineno):
        if not isinstance(entry, dict):
            raise ParseError(f"mention entry must be an object, got {entry!r}", lineno)
        start = _expect(entry, "start", int, lineno)
        end = _expect(entry, "end", int, lineno)
        type_name = _expect(entry, "type", str, lineno)
        try:
            ctype = concept_type_from_string(type_name)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if ctype is ConceptType.MIXED:
            raise ParseError("mentions cannot be typed 'Mixed'", lineno)
        if "source" in entry:
            source_name = _expect(entry, "source", str, lineno)
            if source_name not in _SOURCES:
                raise ParseError(f"unknown mention source {source_name!r}", lineno)
            source = _SOURCES[source_name]
        else:
            source = (
                MentionSource.COREF_ONLY
                if ctype is ConceptType.NONE
                else MentionSource.CONCEPT_EXTRACTOR
            )
        mentions.append(Mention(doc_id, start, end, ctype, text[start:end], source))

    clusters: list[CoreferenceCluster] = []
    for group in _expect(obj, "clusters", list, lineno):
        if not isinstance(group, list) or not group:
            raise ParseError(f"cluster must be a non-empty list of mention indices", lineno)
        members = []
        for idx in group:
            if not isinstance(idx, int) or not (0 <= idx < len(mentions)):
                raise ParseError(
                    f"mention index {idx!r} out of range (document has {len(mentions)})", lineno
                )
            members.append(mentions[idx])
        clusters.append(CoreferenceCluster(doc_id, frozenset(members)))

    entity_links: dict[Mention, str] | None = None
    if "entity_links" in obj:
        entity_links = {}
        for pair in _expect(obj, "entity_links", list, lineno):
            if not (isinstance(pair, list) and len(pair) == 2):
                raise ParseError(f"entity link must be [index, entity], got {pair!r}", lineno)
            idx, entity = pair
            if not isinstance(idx, int) or not (0 <= idx < len(mentions)):
                raise ParseError(f"entity link index {idx!r} out of range", lineno)
            if not isinstance(entity, str) or not entity:
                raise ParseError(f"entity id must be a non-empty string, got {entity!r}", lineno)
            entity_links[mentions[idx]] = entity

    return Document(
        doc_id=doc_id,
        domain=domain,
        text=text,
        mentions=tuple(mentions),
        clusters=tuple(clusters),
        entity_links=entity_links,
    )


def read_jsonl(stream: str | Iterable[str]) -> Corpus:
    """Parse a JSONL corpus; schema violations report the offending line."""
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = [line.rstrip("\n") for line in stream]
    documents = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(obj, dict):
            raise ParseError("document line must be a JSON object", lineno)
        documents.append(document_from_dict(obj, lineno))
    return Corpus(tuple(documents))
