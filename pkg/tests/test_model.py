import random

import pytest

from corefkg.errors import ValidationError
from corefkg.model import (
    ConceptType,
    CoreferenceCluster,
    Corpus,
    Document,
    Mention,
    MentionSource,
    all_clusters,
    corpus_stats,
    validate,
    validate_corpus,
)

from corpusgen import random_corpus


def mk_doc():
    text = "The CNN performs well. The CNN is fast."
    m1 = Mention("doc1", 4, 7, ConceptType.METHOD, "CNN")
    m2 = Mention("doc1", 27, 30, ConceptType.METHOD, "CNN")
    cluster = CoreferenceCluster("doc1", frozenset([m1, m2]))
    return Document("doc1", "CS", text, (m1, m2), (cluster,))


def test_validate_well_formed():
    assert validate(mk_doc()) == []


def test_validate_offset_order():
    doc = Document("doc1", "CS", "hello", (Mention("doc1", 5, 5, ConceptType.DATA, ""),))
    violations = validate(doc)
    assert violations == ["offset order violated @ doc1[5,5)"]


def test_validate_offset_out_of_range():
    doc = Document("doc1", "CS", "hi", (Mention("doc1", 0, 9, ConceptType.DATA, "hi"),))
    assert any("offset out of range" in v for v in validate(doc))


def test_validate_surface_mismatch():
    doc = Document("doc1", "CS", "hello", (Mention("doc1", 0, 4, ConceptType.DATA, "heXX"),))
    assert any("surface mismatch" in v for v in validate(doc))


def test_validate_overlapping_clusters():
    doc = mk_doc()
    m1, m2 = doc.mentions
    extra = CoreferenceCluster("doc1", frozenset([m1]))
    bad = Document(doc.doc_id, doc.domain, doc.text, doc.mentions, doc.clusters + (extra,))
    violations = validate(bad)
    assert sum("overlapping clusters" in v for v in violations) == 1


def test_validate_mixed_mention_rejected():
    doc = Document("d", "CS", "abc", (Mention("d", 0, 3, ConceptType.MIXED, "abc"),))
    assert any("Mixed" in v for v in validate(doc))


def test_validate_duplicate_key():
    m = Mention("d", 0, 3, ConceptType.DATA, "abc")
    doc = Document("d", "CS", "abc", (m, Mention("d", 0, 3, ConceptType.DATA, "abc")))
    assert any("duplicate mention key" in v for v in validate(doc))


def test_validate_corpus_duplicate_doc_ids():
    doc = Document("d", "CS", "abc")
    assert any("duplicate doc_id" in v for v in validate_corpus(Corpus((doc, doc))))


def test_cluster_must_be_nonempty():
    with pytest.raises(ValueError):
        CoreferenceCluster("d", frozenset())


def test_all_clusters_augments_singletons():
    text = "a b c"
    ms = [Mention("d", i * 2, i * 2 + 1, ConceptType.DATA, text[i * 2]) for i in range(3)]
    annotated = CoreferenceCluster("d", frozenset(ms[:2]))
    doc = Document("d", "CS", text, tuple(ms), (annotated,))
    clusters = all_clusters(doc)
    assert set(clusters) == {annotated, CoreferenceCluster("d", frozenset([ms[2]]))}


def test_all_clusters_empty_doc():
    assert all_clusters(Document("d", "CS", "")) == ()


def test_all_clusters_rejects_invalid():
    doc = Document("d", "CS", "ab", (Mention("d", 1, 1, ConceptType.DATA, ""),))
    with pytest.raises(ValidationError):
        all_clusters(doc)


def test_all_clusters_is_partition():
    rng = random.Random(7)
    for _ in range(25):
        for doc in random_corpus(rng):
            clusters = all_clusters(doc)
            union = [m for c in clusters for m in c.mentions]
            assert len(union) == len(set(union)) == len(doc.mentions)
            assert set(union) == set(doc.mentions)
            assert all(c.mentions for c in clusters)


def test_cluster_concept_type():
    a = Mention("d", 0, 1, ConceptType.MATERIAL, "x")
    b = Mention("d", 2, 3, ConceptType.MATERIAL, "y")
    c = Mention("d", 4, 5, ConceptType.PROCESS, "z")
    p = Mention("d", 6, 7, ConceptType.NONE, "w", MentionSource.COREF_ONLY)
    assert CoreferenceCluster("d", frozenset([a, b])).concept_type() is ConceptType.MATERIAL
    assert CoreferenceCluster("d", frozenset([a, c])).concept_type() is ConceptType.MIXED
    assert CoreferenceCluster("d", frozenset([p])).concept_type() is ConceptType.NONE
    assert CoreferenceCluster("d", frozenset([a, p])).concept_type() is ConceptType.MATERIAL


def build_typed_corpus():
    # doc A (domain X): typed mentions a,b coreferent; c singleton; pronoun p in cluster with a,b
    text = "alpha beta gamma it"
    a = Mention("A", 0, 5, ConceptType.DATA, "alpha")
    b = Mention("A", 6, 10, ConceptType.DATA, "beta")
    c = Mention("A", 11, 16, ConceptType.PROCESS, "gamma")
    p = Mention("A", 17, 19, ConceptType.NONE, "it", MentionSource.COREF_ONLY)
    doc_a = Document("A", "X", text, (a, b, c, p),
                     (CoreferenceCluster("A", frozenset([a, b, p])),))
    # doc B (domain Y): mixed-type cluster, one singleton
    text_b = "delta epsilon zeta"
    d = Mention("B", 0, 5, ConceptType.MATERIAL, "delta")
    e = Mention("B", 6, 13, ConceptType.METHOD, "epsilon")
    f = Mention("B", 14, 18, ConceptType.METHOD, "zeta")
    doc_b = Document("B", "Y", text_b, (d, e, f),
                     (CoreferenceCluster("B", frozenset([d, e])),))
    return Corpus((doc_a, doc_b))


def test_corpus_stats_by_type():
    table = corpus_stats(build_typed_corpus(), "concept_type")
    rows = table.rows
    assert rows["Data"].mentions == 2
    assert rows["Data"].coreferent_mentions == 2
    assert rows["None"].mentions == 0  # coref-only mentions are not concept mentions
    assert rows["None"].coreferent_mentions == 1
    assert rows["Data"].coreference_clusters == 1
    assert rows["Mixed"].coreference_clusters == 1
    assert rows["Process"].singleton_clusters == 1
    assert rows["Method"].singleton_clusters == 1
    assert table.total.mentions == 6
    assert table.total.coreferent_mentions == 5
    assert table.total.overall_clusters == 4


def test_corpus_stats_by_domain():
    table = corpus_stats(build_typed_corpus(), "domain")
    assert table.rows["X"].mentions == 3
    assert table.rows["X"].coreferent_mentions == 3
    assert table.rows["Y"].coreference_clusters == 1
    assert table.total.mentions == 6


def test_corpus_stats_empty():
    table = corpus_stats(Corpus(()), "concept_type")
    assert table.total.mentions == 0
    assert table.total.overall_clusters == 0
    assert all(r.overall_clusters == 0 for r in table.rows.values())


def test_corpus_stats_accounting_property():
    # coreferent mentions + singleton clusters = all mentions (typed + coref-only)
    rng = random.Random(13)
    for _ in range(20):
        corpus = random_corpus(rng)
        n_all = sum(len(d.mentions) for d in corpus)
        for group_by in ("concept_type", "domain"):
            table = corpus_stats(corpus, group_by)
            assert table.total.coreferent_mentions + table.total.singleton_clusters == n_all
            # totals equal the sum over groups
            assert table.total.mentions == sum(r.mentions for r in table.rows.values())
            assert table.total.overall_clusters == sum(
                r.overall_clusters for r in table.rows.values()
            )


def test_corpus_stats_unknown_grouping():
    with pytest.raises(ValueError):
        corpus_stats(Corpus(()), "banana")
