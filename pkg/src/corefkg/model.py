"""Core data model: typed mentions, coreference clusters, documents, corpora.

A mention is a contiguous character span over the document text, typed with
one of four scientific concept types (or ``None`` for spans contributed only
by coreference annotation, e.g. pronouns). Its identity key is the 4-tuple
(doc_id, start, end, concept_type). Clusters group mentions within a single
document; a cluster of size one is a singleton cluster.

All types are immutable value objects; every operation here is a pure
function of its inputs, so documents can be processed concurrently.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

from .errors import ValidationError

__all__ = [
    "ConceptType",
    "MentionSource",
    "MentionKey",
    "Mention",
    "CoreferenceCluster",
    "Document",
    "Corpus",
    "CANONICAL_TYPES",
    "concept_type_from_string",
    "validate",
    "validate_corpus",
    "all_clusters",
    "corpus_stats",
    "StatRow",
    "StatsTable",
]


class ConceptType(enum.Enum):
    """Concept type of a mention, cluster, or KG concept.

    ``MIXED`` is a bookkeeping value for clusters/concepts whose members
    disagree; it is never assigned to a single mention. ``NONE`` marks
    mentions found only by coreference annotation (pronouns and noun
    phrases spanning several original mentions).
    """

    PROCESS = "Process"
    METHOD = "Method"
    MATERIAL = "Material"
    DATA = "Data"
    NONE = "None"
    MIXED = "Mixed"

    def __str__(self) -> str:
        return self.value


#: The four types a single mention may carry (besides NONE).
CANONICAL_TYPES = (
    ConceptType.DATA,
    ConceptType.MATERIAL,
    ConceptType.METHOD,
    ConceptType.PROCESS,
)

_TYPE_BY_NAME = {t.value: t for t in ConceptType}


def concept_type_from_string(name: str) -> ConceptType:
    """Map a serialized type name to a ConceptType; raises on unknown values."""
    try:
        return _TYPE_BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown concept type {name!r}") from None


class MentionSource(enum.Enum):
    """Which stage produced a mention."""

    CONCEPT_EXTRACTOR = "concept_extractor"
    COREF_ONLY = "coref_only"


#: Identity key of a mention within a corpus: (doc_id, start, end, type name).
MentionKey = tuple[str, int, int, str]


@dataclass(frozen=True)
class Mention:
    """A typed text span; ``surface`` must equal ``text[start:end]`` of its document."""

    doc_id: str
    start: int
    end: int
    concept_type: ConceptType
    surface: str
    source: MentionSource = MentionSource.CONCEPT_EXTRACTOR

    @property
    def key(self) -> MentionKey:
        return (self.doc_id, self.start, self.end, self.concept_type.value)

    def span(self) -> str:
        return f"{self.doc_id}[{self.start},{self.end})"


@dataclass(frozen=True)
class CoreferenceCluster:
    """A non-empty set of mentions of one document referring to the same concept."""

    doc_id: str
    mentions: frozenset[Mention]

    def __post_init__(self):
        object.__setattr__(self, "mentions", frozenset(self.mentions))
        if not self.mentions:
            raise ValueError(f"empty cluster in document {self.doc_id!r}")

    @property
    def size(self) -> int:
        return len(self.mentions)

    @property
    def is_singleton(self) -> bool:
        return len(self.mentions) == 1

    def sorted_mentions(self) -> list[Mention]:
        return sorted(self.mentions, key=lambda m: (m.start, m.end, m.concept_type.value))

    def span_key(self) -> tuple[int, int]:
        """Deterministic sort key: position of the earliest member."""
        first = min((m.start, m.end) for m in self.mentions)
        return first

    def concept_type(self) -> ConceptType:
        """Type describing the whole cluster.

        The shared type if all non-None members agree, MIXED if they
        disagree, NONE if every member is a coreference-only mention.
        """
        types = {m.concept_type for m in self.mentions} - {ConceptType.NONE}
        if not types:
            return ConceptType.NONE
        if len(types) == 1:
            return next(iter(types))
        return ConceptType.MIXED


@dataclass(frozen=True)
class Document:
    """An abstract with its text, mentions, coreference clusters and domain tag.

    ``entity_links`` optionally maps mentions to external entity identifiers
    (opaque strings, e.g. Wikipedia page titles).
    """

    doc_id: str
    domain: str
    text: str
    mentions: tuple[Mention, ...] = ()
    clusters: tuple[CoreferenceCluster, ...] = ()
    entity_links: dict[Mention, str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "mentions", tuple(self.mentions))
        object.__setattr__(self, "clusters", tuple(self.clusters))
        if self.entity_links is not None and not self.entity_links:
            object.__setattr__(self, "entity_links", None)


@dataclass(frozen=True)
class Corpus:
    """A collection of documents with unique doc_ids."""

    documents: tuple[Document, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "documents", tuple(self.documents))

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def document(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.doc_id == doc_id:
                return doc
        raise KeyError(doc_id)

    def domains(self) -> dict[str, str]:
        return {doc.doc_id: doc.domain for doc in self.documents}


def validate(doc: Document) -> list[str]:
    """Check all document invariants; returns one entry per violation.

    Violations are data, not failures: an empty list means the document is
    well formed. Each entry names the rule and the offending span.
    """
    violations: list[str] = []
    n = len(doc.text)
    seen_keys: set[MentionKey] = set()
    for m in doc.mentions:
        if m.doc_id != doc.doc_id:
            violations.append(f"mention doc_id mismatch @ {m.span()} in document {doc.doc_id!r}")
        if not (0 <= m.start < m.end):
            violations.append(f"offset order violated @ {m.span()}")
        elif m.end > n:
            violations.append(f"offset out of range @ {m.span()} for text of length {n}")
        elif doc.text[m.start:m.end] != m.surface:
            violations.append(
                f"surface mismatch @ {m.span()}: {m.surface!r} != {doc.text[m.start:m.end]!r}"
            )
        if m.concept_type is ConceptType.MIXED:
            violations.append(f"mention typed Mixed @ {m.span()}")
        if m.key in seen_keys:
            violations.append(f"duplicate mention key @ {m.span()} type {m.concept_type}")
        seen_keys.add(m.key)

    known = set(doc.mentions)
    cluster_count: Counter[Mention] = Counter()
    for cluster in doc.clusters:
        if cluster.doc_id != doc.doc_id:
            violations.append(
                f"cluster doc_id mismatch: cluster of {cluster.doc_id!r} in document {doc.doc_id!r}"
            )
        for m in cluster.mentions:
            cluster_count[m] += 1
            if m.doc_id != doc.doc_id:
                violations.append(f"cluster member from another document @ {m.span()}")
            if m not in known:
                violations.append(f"cluster member not in document mentions @ {m.span()}")
    for m, k in sorted(cluster_count.items(), key=lambda kv: (kv[0].start, kv[0].end)):
        if k > 1:
            violations.append(f"overlapping clusters @ {m.span()}: mention in {k} clusters")
    return violations


def validate_corpus(corpus: Corpus) -> list[str]:
    """Validate every document plus corpus-level uniqueness of doc_ids."""
    violations: list[str] = []
    seen: set[str] = set()
    for doc in corpus:
        if doc.doc_id in seen:
            violations.append(f"duplicate doc_id {doc.doc_id!r}")
        seen.add(doc.doc_id)
        violations.extend(validate(doc))
    return violations


def all_clusters(doc: Document) -> tuple[CoreferenceCluster, ...]:
    """Annotated clusters plus one singleton per mention not covered by any.

    The result is a partition of ``doc.mentions``: annotated clusters first
    (in document order), then singletons in mention order.

    Raises ValidationError for an invalid document.
    """
    violations = validate(doc)
    if violations:
        raise ValidationError(violations)
    covered: set[Mention] = set()
    for cluster in doc.clusters:
        covered.update(cluster.mentions)
    singletons = tuple(
        CoreferenceCluster(doc.doc_id, frozenset([m])) for m in doc.mentions if m not in covered
    )
    return doc.clusters + singletons


_TYPE_GROUPS = ("Data", "Material", "Method", "Process", "Mixed", "None")


@dataclass(frozen=True)
class StatRow:
    """One row of corpus statistics.

    ``mentions`` counts concept mentions (the four canonical types only);
    ``coreferent_mentions`` counts every mention, including coreference-only
    ones, that sits in a cluster of size >= 2.
    """

    mentions: int = 0
    coreferent_mentions: int = 0
    coreference_clusters: int = 0
    singleton_clusters: int = 0

    @property
    def overall_clusters(self) -> int:
        return self.coreference_clusters + self.singleton_clusters

    def _add(self, **delta: int) -> "StatRow":
        return StatRow(
            mentions=self.mentions + delta.get("mentions", 0),
            coreferent_mentions=self.coreferent_mentions + delta.get("coreferent_mentions", 0),
            coreference_clusters=self.coreference_clusters + delta.get("coreference_clusters", 0),
            singleton_clusters=self.singleton_clusters + delta.get("singleton_clusters", 0),
        )


@dataclass(frozen=True)
class StatsTable:
    group_by: str
    rows: dict[str, StatRow] = field(default_factory=dict)
    total: StatRow = StatRow()

    def to_tsv(self) -> str:
        header = [
            self.group_by,
            "mentions",
            "coreferent_mentions",
            "coreference_clusters",
            "singleton_clusters",
            "overall_clusters",
        ]
        lines = ["\t".join(header)]
        for group, row in self.rows.items():
            lines.append(
                "\t".join(
                    str(v)
                    for v in (
                        group,
                        row.mentions,
                        row.coreferent_mentions,
                        row.coreference_clusters,
                        row.singleton_clusters,
                        row.overall_clusters,
                    )
                )
            )
        t = self.total
        lines.append(
            "\t".join(
                str(v)
                for v in (
                    "Total",
                    t.mentions,
                    t.coreferent_mentions,
                    t.coreference_clusters,
                    t.singleton_clusters,
                    t.overall_clusters,
                )
            )
        )
        return "\n".join(lines) + "\n"


def corpus_stats(corpus: Corpus, group_by: str = "concept_type") -> StatsTable:
    """Mention/cluster counts per concept type or per domain, plus totals.

    Grouping by concept type, a cluster with disagreeing member types counts
    under Mixed and a cluster of only coreference-found mentions under None.
    The ``mentions`` column always counts concept mentions only, so its
    Mixed/None cells are zero by construction.
    """
    if group_by not in ("concept_type", "domain"):
        raise ValueError(f"unknown grouping {group_by!r}")
    violations = validate_corpus(corpus)
    if violations:
        raise ValidationError(violations)

    rows: dict[str, StatRow] = {}
    if group_by == "concept_type":
        rows = {g: StatRow() for g in _TYPE_GROUPS}

    def bump(group: str, **delta: int) -> None:
        rows[group] = rows.get(group, StatRow())._add(**delta)

    for doc in corpus:
        clusters = all_clusters(doc)
        for m in doc.mentions:
            if m.concept_type in CANONICAL_TYPES:
                group = m.concept_type.value if group_by == "concept_type" else doc.domain
                bump(group, mentions=1)
        for cluster in clusters:
            if cluster.is_singleton:
                group = (
                    cluster.concept_type().value if group_by == "concept_type" else doc.domain
                )
                bump(group, singleton_clusters=1)
            else:
                group = (
                    cluster.concept_type().value if group_by == "concept_type" else doc.domain
                )
                bump(group, coreference_clusters=1)
                for m in cluster.mentions:
                    g = m.concept_type.value if group_by == "concept_type" else doc.domain
                    bump(g, coreferent_mentions=1)

    if group_by == "domain":
        rows = dict(sorted(rows.items()))
    total = StatRow(
        mentions=sum(r.mentions for r in rows.values()),
        coreferent_mentions=sum(r.coreferent_mentions for r in rows.values()),
        coreference_clusters=sum(r.coreference_clusters for r in rows.values()),
        singleton_clusters=sum(r.singleton_clusters for r in rows.values()),
    )
    return StatsTable(group_by=group_by, rows=rows, total=total)
