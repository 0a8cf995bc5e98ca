"""Reader/writer for BRAT standoff annotation (.txt/.ann file pairs).

Entity lines (``T1<TAB>Material 0 3<TAB>CNN``) become mentions. Coreference
is accepted in two encodings and unioned: binary relation lines
(``R1<TAB>Coreference Arg1:T1 Arg2:T2``), whose transitive closure forms the
clusters, and equivalence lines (``*<TAB>Coreference T1 T2 T3``), taken as
whole clusters. The relation/equivalence label is configurable because
published corpora do not agree on one.

Character offsets are Unicode scalar-value counts. Discontinuous spans
(offsets containing ';') are rejected.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import ParseError
from .model import (
    ConceptType,
    CoreferenceCluster,
    Corpus,
    Document,
    Mention,
    MentionSource,
)
from .unionfind import UnionFind

__all__ = [
    "DEFAULT_RELATION_LABEL",
    "COREF_MENTION_LABEL",
    "parse_brat",
    "write_brat",
    "read_brat_dir",
    "write_brat_dir",
]

DEFAULT_RELATION_LABEL = "Coreference"

#: Entity-type label used for mentions that only the coreference annotation
#: contributes (pronouns etc.); they carry no scientific concept type.
COREF_MENTION_LABEL = "CorefMention"

_ENTITY_TYPES = {t.value: t for t in ConceptType if t not in (ConceptType.NONE, ConceptType.MIXED)}
_ENTITY_TYPES[COREF_MENTION_LABEL] = ConceptType.NONE

_T_LINE = re.compile(r"^(T\d+)\t(\S+) (\d+) (\d+)\t(.*)$")
_T_DISCONT = re.compile(r"^(T\d+)\t(\S+) [\d;, ]*;[\d;, ]*\t")
_R_LINE = re.compile(r"^R\d+\t(\S+) Arg1:(T\d+) Arg2:(T\d+)\s*$")
_EQUIV_LINE = re.compile(r"^\*\t(\S+)((?: T\d+)+)\s*$")


def parse_brat(
    text: str,
    ann: str,
    domain: str = "",
    *,
    doc_id: str = "doc",
    relation_label: str = DEFAULT_RELATION_LABEL,
    entity_types: dict[str, ConceptType] | None = None,
) -> Document:
    """Parse one .txt/.ann pair into a Document.

    Raises ParseError (with the offending .ann line number) for malformed
    lines, out-of-range offsets, surface mismatches, discontinuous spans,
    unknown entity types and unsupported record kinds.
    """
    types = entity_types if entity_types is not None else _ENTITY_TYPES
    mentions_by_tid: dict[str, Mention] = {}
    order: list[str] = []
    links = UnionFind()

    for lineno, raw in enumerate(ann.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):  # annotator notes, ignored
            continue
        kind = line[0]
        if kind == "T":
            if _T_DISCONT.match(line):
                raise ParseError("discontinuous span is not supported", lineno)
            m = _T_LINE.match(line)
            if not m:
                raise ParseError(f"malformed entity line: {line!r}", lineno)
            tid, type_name, start_s, end_s, surface = m.groups()
            if tid in mentions_by_tid:
                raise ParseError(f"duplicate entity id {tid}", lineno)
            if type_name not in types:
                raise ParseError(f"unknown entity type {type_name!r}", lineno)
            start, end = int(start_s), int(end_s)
            if start < 0 or start >= end:
                raise ParseError(f"offset order violated: [{start},{end})", lineno)
            if end > len(text):
                raise ParseError(
                    f"offsets [{start},{end}) out of range for text of length {len(text)}", lineno
                )
            actual = text[start:end]
            if actual.replace("\n", " ") != surface.replace("\n", " "):
                raise ParseError(
                    f"surface mismatch for {tid}: annotation {surface!r} != text {actual!r}", lineno
                )
            ctype = types[type_name]
            source = (
                MentionSource.COREF_ONLY
                if ctype is ConceptType.NONE
                else MentionSource.CONCEPT_EXTRACTOR
            )
            mentions_by_tid[tid] = Mention(doc_id, start, end, ctype, actual, source)
            order.append(tid)
        elif kind == "R":
            m = _R_LINE.match(line)
            if not m:
                raise ParseError(f"malformed relation line: {line!r}", lineno)
            label, arg1, arg2 = m.groups()
            if label != relation_label:
                raise ParseError(f"unsupported relation type {label!r}", lineno)
            for tid in (arg1, arg2):
                if tid not in mentions_by_tid:
                    raise ParseError(f"relation references unknown entity {tid}", lineno)
            links.union(arg1, arg2)
        elif kind == "*":
            m = _EQUIV_LINE.match(line)
            if not m:
                raise ParseError(f"malformed equivalence line: {line!r}", lineno)
            label, members = m.groups()
            if label != relation_label:
                raise ParseError(f"unsupported equivalence type {label!r}", lineno)
            tids = members.split()
            for tid in tids:
                if tid not in mentions_by_tid:
                    raise ParseError(f"equivalence references unknown entity {tid}", lineno)
            for tid in tids:
                links.union(tids[0], tid)
        else:
            raise ParseError(f"unsupported record type {kind!r}: {line!r}", lineno)

    groups = sorted(
        (sorted(g, key=lambda t: int(t[1:])) for g in links.groups()),
        key=lambda g: min((mentions_by_tid[t].start, mentions_by_tid[t].end) for t in g),
    )
    clusters = tuple(
        CoreferenceCluster(doc_id, frozenset(mentions_by_tid[t] for t in g)) for g in groups
    )
    mentions = tuple(mentions_by_tid[t] for t in order)
    return Document(doc_id=doc_id, domain=domain, text=text, mentions=mentions, clusters=clusters)


def write_brat(doc: Document, *, relation_label: str = DEFAULT_RELATION_LABEL) -> tuple[str, str]:
    """Serialize a Document to a (text, ann) pair.

    Clusters of size >= 2 are written as equivalence lines; singleton
    clusters are implicit (re-parsing restores them via all_clusters).
    """
    label_by_type = {t: name for name, t in _ENTITY_TYPES.items()}
    tid_by_mention: dict[Mention, str] = {}
    lines: list[str] = []
    for i, m in enumerate(doc.mentions, start=1):
        if m.concept_type is ConceptType.MIXED:
            raise ValueError(f"mention typed Mixed cannot be serialized @ {m.span()}")
        tid = f"T{i}"
        tid_by_mention[m] = tid
        surface = doc.text[m.start:m.end].replace("\n", " ")
        lines.append(f"{tid}\t{label_by_type[m.concept_type]} {m.start} {m.end}\t{surface}")
    for cluster in sorted(
        (c for c in doc.clusters if c.size >= 2), key=CoreferenceCluster.span_key
    ):
        tids = " ".join(tid_by_mention[m] for m in cluster.sorted_mentions())
        lines.append(f"*\t{relation_label} {tids}")
    ann = "\n".join(lines) + "\n" if lines else ""
    return doc.text, ann


def read_brat_dir(
    root: str | Path,
    *,
    relation_label: str = DEFAULT_RELATION_LABEL,
    entity_types: dict[str, ConceptType] | None = None,
) -> Corpus:
    """Read every .txt/.ann pair under ``root`` into a corpus.

    The doc_id is the path relative to ``root`` without extension; the
    domain is the first directory component (empty for flat layouts).
    """
    root = Path(root)
    documents = []
    for txt_path in sorted(root.rglob("*.txt")):
        ann_path = txt_path.with_suffix(".ann")
        if not ann_path.exists():
            raise ParseError(f"missing annotation file for {txt_path}")
        rel = txt_path.relative_to(root).with_suffix("")
        doc_id = rel.as_posix()
        domain = rel.parts[0] if len(rel.parts) > 1 else ""
        try:
            documents.append(
                parse_brat(
                    txt_path.read_text("utf-8"),
                    ann_path.read_text("utf-8"),
                    domain,
                    doc_id=doc_id,
                    relation_label=relation_label,
                    entity_types=entity_types,
                )
            )
        except ParseError as exc:
            raise ParseError(f"{ann_path}: {exc}") from exc
    return Corpus(tuple(documents))


def write_brat_dir(
    corpus: Corpus, root: str | Path, *, relation_label: str = DEFAULT_RELATION_LABEL
) -> None:
    """Write a corpus as .txt/.ann pairs under ``root``, one subdir per domain."""
    root = Path(root)
    for doc in corpus:
        text, ann = write_brat(doc, relation_label=relation_label)
        rel = Path(doc.doc_id)
        if doc.domain and rel.parts[:1] != (doc.domain,):
            rel = Path(doc.domain) / rel
        target = root / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.with_suffix(".txt").write_text(text, "utf-8")
        target.with_suffix(".ann").write_text(ann, "utf-8")
