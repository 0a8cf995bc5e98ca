"""Deterministic string-match coreference baseline.

Clusters the mentions of a document whose normalized labels coincide (using
the document's acronym expansions), so the full population pipeline can run
end-to-end without a learned resolver. Pronouns are never clustered: string
identity is a catastrophically bad signal for them.
"""

from __future__ import annotations

import concurrent.futures

from .model import CoreferenceCluster, Corpus, Document
from .normalize import build_acronym_map, normalize_mention

__all__ = ["PRONOUNS", "resolve", "resolve_corpus"]

PRONOUNS = frozenset(
    {"it", "they", "them", "this", "that", "these", "those", "its", "their"}
)


def resolve(doc: Document) -> tuple[CoreferenceCluster, ...]:
    """Partition the document's non-pronoun mentions by normalized label.

    Label-unique mentions stay singletons; mentions whose label is empty
    after normalization never merge. The result is independent of mention
    order.
    """
    acronyms = build_acronym_map(doc.text)
    groups: dict[str, list] = {}
    for m in doc.mentions:
        if m.surface.strip().lower() in PRONOUNS:
            continue
        label = normalize_mention(m.surface, acronyms)
        key = label if label else f"\x00{m.start}:{m.end}:{m.concept_type.value}"
        groups.setdefault(key, []).append(m)
    clusters = [CoreferenceCluster(doc.doc_id, frozenset(ms)) for ms in groups.values()]
    clusters.sort(key=CoreferenceCluster.span_key)
    return tuple(clusters)


def _resolve_doc(doc: Document) -> Document:
    return Document(
        doc_id=doc.doc_id,
        domain=doc.domain,
        text=doc.text,
        mentions=doc.mentions,
        clusters=resolve(doc),
        entity_links=doc.entity_links,
    )


def resolve_corpus(corpus: Corpus, jobs: int = 1) -> Corpus:
    """Replace every document's clusters with baseline predictions.

    ``jobs > 1`` resolves documents in a process pool; results are merged in
    input order, so the output is identical to the serial run.
    """
    if jobs <= 1 or len(corpus) <= 1:
        return Corpus(tuple(_resolve_doc(doc) for doc in corpus))
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return Corpus(tuple(pool.map(_resolve_doc, corpus.documents)))
