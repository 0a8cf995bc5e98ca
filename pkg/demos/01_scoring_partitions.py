"""Scoring coreference partitions with MUC, B-cubed, entity CEAF and CoNLL.

A partition groups mention ids into disjoint parts; the *key* is the gold
partition and the *response* the predicted one. All components come back as
exact fractions, so you can reason about the numbers instead of squinting
at floats.
"""

import random
from fractions import Fraction

from corefkg import Partition, align_mentions, score

# The classic illustration: the gold says {a, b, c} corefer, the system
# split off c. MUC loses half the links, B-cubed 4/9 of the mention mass,
# and entity CEAF pays on the precision side for the spurious part.
key = Partition([{"a", "b", "c"}])
response = Partition([{"a", "b"}, {"c"}])

report = score(key, response)
print("worked example:")
print(report.to_table())
print("exact F1 values:",
      report.muc.f1, report.b3.f1, report.ceaf_e.f1, report.conll.f1)
assert report.conll.f1 == Fraction(67, 105)

# Twinless mentions (present on one side only) are aligned away by adding
# singleton parts to the other side before scoring.
k2, r2 = align_mentions(Partition([{"a", "b"}]), Partition([{"a"}]))
print("\nafter alignment the response grew a singleton:", r2)

# Scores are symmetric in a precise sense: swapping key and response swaps
# precision and recall.
rng = random.Random(1)
mentions = [f"m{i}" for i in range(12)]
rng.shuffle(mentions)
key = Partition([set(mentions[:5]), set(mentions[5:8]), set(mentions[8:])])
rng.shuffle(mentions)
response = Partition([set(mentions[:2]), set(mentions[2:9]), set(mentions[9:])])
forward = score(key, response)
backward = score(response, key)
assert forward.muc.precision == backward.muc.recall
print("\nduality check on a random pair:")
print(forward.to_table())
