"""Weighted unary-binary trees for ``T' = T**2 + T + 1``.

Each tree has weight ``a**binary * b**unary * c**leaves``.  With all weights
equal to 1 every tree counts once, and unary nodes make even sizes possible.
"""

from collections import Counter

from incrtree import BitSource, family_counts, make_spec
from incrtree.family import FamilyStats, asymptotic_interval, sample_tree
from incrtree.tree_model import enumerate_family_trees, strip_decorations

spec = make_spec(1, 1, 1)
print("weighted counts t_1..t_8:", [int(x) for x in family_counts(1, 1, 1, 8)[1:]])

census = enumerate_family_trees(1, 1, 1, 4)
print(f"\nall {len(census)} trees of size 4:")
for tree, w in census:
    print(f"  {tree}  weight {w}")

src = BitSource(seed=5)
# colour 1 of 1 is attached to every leaf and unary node; drop it for display
seen = Counter(str(strip_decorations(sample_tree(spec, 4, src))) for _ in range(9000))
print("\nsampled frequencies (each should be near 1000):")
for key, c in sorted(seen.items()):
    print(f"  {key:<12} {c}")

st = FamilyStats()
big = sample_tree(spec, 200, BitSource(6), st)
print(f"\nsize 200: {st.unary} unary and {st.binary} binary nodes, {st.bits} bits,"
      f" {st.refinements} precision refinements")

t30 = family_counts(1, 1, 1, 30)[30]
print("t_30 over its first-order estimate:", float(t30 / asymptotic_interval(spec, 30).mid))
