"""Tangent numbers, alternating permutations and the trees they encode.

A strictly increasing binary tree read in order gives a down-up permutation,
and the smallest entry of such a permutation splits it back into two
subtrees.  This script walks through that correspondence for small sizes.
"""

from incrtree import tangent_counts
from incrtree.tree_model import (alternating_permutations, enumerate_strict_trees,
                                 inorder_labels, tree_from_permutation)

t = tangent_counts(13)
print("odd-size counts:", {n: t[n] for n in range(1, 14, 2)})

n = 5
trees = enumerate_strict_trees(n)
perms = list(alternating_permutations(n))
print(f"\n{len(trees)} trees and {len(perms)} down-up permutations of size {n}")

for p in perms[:4]:
    tree = tree_from_permutation(p)
    print(f"  {' '.join(map(str, p))}  ->  {tree}")
    assert tuple(inorder_labels(tree)) == p

# the map is a bijection on odd sizes
assert {tree_from_permutation(p) for p in perms} == set(trees)
print("\nevery tree is hit exactly once")
