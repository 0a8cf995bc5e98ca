"""Compiling a gold knowledge graph from entity links and evaluating
population strategies against it.

A cluster enters the gold KG only if every mention is linked to the same
external entity; clusters sharing an entity merge into one gold concept.
Population strategies are then scored against that partition with the
coreference metrics, restricted to the gold mention universe.
"""

from pathlib import Path

from corefkg import (
    CollapseStrategy,
    DomainScope,
    attach_entity_links,
    compile_gold,
    evaluate_population,
    read_brat_dir,
    read_entity_links,
    write_gold_jsonl,
)

DATA = Path(__file__).parent / "data"

corpus = read_brat_dir(DATA / "toy_brat")
links = read_entity_links((DATA / "toy_links.tsv").read_text("utf-8"))
corpus = attach_entity_links(corpus, links)

gold = compile_gold(corpus)
print(f"gold KG: {gold.n_clusters_kept} clusters kept "
      f"({gold.n_singleton_clusters} singletons) -> {len(gold.concepts)} concepts, "
      f"{gold.mix_count(corpus.domains())} cross-domain")
for concept in gold.concepts:
    print(f"  {concept.entity}: {len(concept.mentions)} mention(s)")
# The CNN/It cluster of CS/paper1 is gone: its pronoun carries no link.

print("\ngold KG file (one concept per line):")
print("\n".join(write_gold_jsonl(gold).splitlines()[:3]))

strategies = {
    "in-domain": CollapseStrategy(DomainScope.IN_DOMAIN),
    "in-domain, no coref": CollapseStrategy(DomainScope.IN_DOMAIN, use_coreference=False),
    "cross-domain": CollapseStrategy(DomainScope.CROSS_DOMAIN),
    "cross-domain, no coref": CollapseStrategy(DomainScope.CROSS_DOMAIN, use_coreference=False),
}
print("\nstrategy evaluation against the gold KG:")
print("strategy                  concepts  CoNLL P  CoNLL R  CoNLL F1")
for name, strategy in strategies.items():
    result = evaluate_population(gold, corpus, strategy)
    p, r, f1 = result.report.conll.as_floats()
    print(f"{name:25s} {result.n_concepts:8d} {100*p:8.1f} {100*r:8.1f} {100*f1:9.1f}")

# Dropping coreference hurts: the catalase pair and the tumour-detection
# chain fall apart unless surface normalization happens to rejoin them.
