"""Regenerate the bundled toy corpus (BRAT pairs + entity links TSV).

The corpus is three short fake abstracts in two domains, small enough to
trace by hand but exercising everything the demos show: acronym
definitions, plural variants, pronouns, coreference clusters, a
cross-domain term and entity links (with one deliberately unlinked
cluster member).

Run from the repository root: python demos/data/make_toy_data.py
"""

from pathlib import Path

from corefkg.brat import write_brat_dir
from corefkg.model import (
    ConceptType,
    CoreferenceCluster,
    Corpus,
    Document,
    Mention,
    MentionSource,
)

HERE = Path(__file__).parent


def mention(doc_id, text, surface, ctype, occurrence=0, source=MentionSource.CONCEPT_EXTRACTOR):
    start = -1
    for _ in range(occurrence + 1):
        start = text.index(surface, start + 1)
    return Mention(doc_id, start, start + len(surface), ctype, surface, source)


def build() -> tuple[Corpus, list[tuple]]:
    links: list[tuple] = []

    # --- CS/paper1 -------------------------------------------------------
    text1 = (
        "We propose a convolutional neural network (CNN) for image "
        "classification. The CNN outperforms support vector machines "
        "(SVMs). It reduces training time."
    )
    d1 = "CS/paper1"
    m_long = mention(d1, text1, "convolutional neural network", ConceptType.METHOD)
    m_cnn = mention(d1, text1, "CNN", ConceptType.METHOD, occurrence=1)
    m_task = mention(d1, text1, "image classification", ConceptType.PROCESS)
    m_svm = mention(d1, text1, "support vector machines", ConceptType.METHOD)
    m_it = mention(d1, text1, "It", ConceptType.NONE, source=MentionSource.COREF_ONLY)
    m_time = mention(d1, text1, "training time", ConceptType.DATA)
    doc1 = Document(
        d1, "CS", text1,
        (m_long, m_cnn, m_task, m_svm, m_it, m_time),
        (CoreferenceCluster(d1, frozenset([m_long, m_cnn, m_it])),),
    )
    links += [
        (m_long, "Convolutional_neural_network"),
        (m_cnn, "Convolutional_neural_network"),
        (m_task, "Contextual_image_classification"),
        (m_svm, "Support_vector_machine"),
        # m_it stays unlinked: its cluster is excluded from the gold KG
    ]

    # --- Med/paper2 ------------------------------------------------------
    text2 = (
        "Convolutional neural networks support tumour detection better "
        "than support vector machines. Such screening needs large data sets."
    )
    d2 = "Med/paper2"
    m_nets = mention(d2, text2, "Convolutional neural networks", ConceptType.METHOD)
    m_det = mention(d2, text2, "tumour detection", ConceptType.PROCESS)
    m_svm2 = mention(d2, text2, "support vector machines", ConceptType.METHOD)
    m_scr = mention(d2, text2, "Such screening", ConceptType.NONE,
                    source=MentionSource.COREF_ONLY)
    m_data = mention(d2, text2, "data sets", ConceptType.MATERIAL)
    doc2 = Document(
        d2, "Med", text2,
        (m_nets, m_det, m_svm2, m_scr, m_data),
        (CoreferenceCluster(d2, frozenset([m_det, m_scr])),),
    )
    links += [
        (m_nets, "Convolutional_neural_network"),
        (m_det, "Computer-aided_diagnosis"),
        (m_svm2, "Support_vector_machine"),  # also linked from CS/paper1
        (m_scr, "Computer-aided_diagnosis"),
        (m_data, "Data_set"),
    ]

    # --- Med/paper3 ------------------------------------------------------
    text3 = (
        "The enzyme catalase protects cells. Catalase reduces oxidative "
        "stress in treated cells."
    )
    d3 = "Med/paper3"
    m_cat1 = mention(d3, text3, "catalase", ConceptType.MATERIAL)
    m_cat2 = mention(d3, text3, "Catalase", ConceptType.MATERIAL)
    m_cells1 = mention(d3, text3, "cells", ConceptType.MATERIAL)
    m_stress = mention(d3, text3, "oxidative stress", ConceptType.PROCESS)
    m_cells2 = mention(d3, text3, "treated cells", ConceptType.MATERIAL)
    doc3 = Document(
        d3, "Med", text3,
        (m_cat1, m_cat2, m_cells1, m_stress, m_cells2),
        (CoreferenceCluster(d3, frozenset([m_cat1, m_cat2])),),
    )
    links += [
        (m_cat1, "Catalase"),
        (m_cat2, "Catalase"),
        (m_cells1, "Cell_(biology)"),
        (m_stress, "Oxidative_stress"),
    ]
    return Corpus((doc1, doc2, doc3)), links


def main() -> None:
    corpus, links = build()
    write_brat_dir(corpus, HERE / "toy_brat")
    rows = [
        f"{m.doc_id}\t{m.start}\t{m.end}\t{m.concept_type.value}\t{entity}"
        for m, entity in links
    ]
    (HERE / "toy_links.tsv").write_text(
        "# doc_id\tstart\tend\ttype\tentity\n" + "\n".join(rows) + "\n", "utf-8"
    )
    print(f"wrote {len(corpus)} documents and {len(rows)} entity links under {HERE}")


if __name__ == "__main__":
    main()
