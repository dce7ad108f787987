"""Draw the same-sized trees with both uniform samplers and compare costs.

The chain sampler builds a random alternating sequence and keeps a few
extra bits per entry; the recursive sampler only pays for the subtree sizes
and label splits, so it stays close to the entropy ``log2 t_n``.
"""

import math

from incrtree import BitSource, tangent_counts
from incrtree.marchal import MarchalStats, sample_tree as chain_tree
from incrtree.recursive import MSampleStats, sample_tree as recursive_tree

src = BitSource(seed=11)
print("a chain-sampled tree of size 9:  ", chain_tree(9, src))
print("a recursively sampled tree:      ", recursive_tree(9, src))

print(f"\n{'n':>6} {'entropy':>9} {'chain':>9} {'recursive':>10}")
for n in (21, 101, 501):
    reps = 20
    cs, rs = MarchalStats(), MSampleStats()
    a = BitSource(1, n)
    for _ in range(reps):
        chain_tree(n, a, stats=cs)
    b = BitSource(2, n)
    for _ in range(reps):
        recursive_tree(n, b, rs)
    floor = math.log2(tangent_counts(n)[n])
    print(f"{n:>6} {floor:>9.0f} {cs.bits / reps:>9.0f} {b.bits_consumed / reps:>10.0f}")

print("\nsubtree-size proposals per draw:", round(rs.iterations / rs.calls, 3))
