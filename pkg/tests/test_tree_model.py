import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from incrtree.errors import AmbiguousOrder, DomainError, SizeTooLarge
from incrtree.exactnum import RealInterval, family_counts, tangent_counts
from incrtree.recursive import sample_tree as recursive_tree
from incrtree.rng_bits import BitSource
from incrtree.tree_model import (AltPermutation, AltSequence, IncreasingTree,
                                 alternating_permutations, build_tree, canonical_key, decode,
                                 encode, enumerate_family_trees, enumerate_strict_trees,
                                 inorder_labels, perm_from_sequence, strip_decorations,
                                 tree_from_permutation, tree_from_sequence, validate)


def leaf(x, d=None):
    return IncreasingTree(x, (), d)


def test_constructor_rejects_decreasing_child():
    with pytest.raises(ValueError):
        IncreasingTree(2, (leaf(1),))


def test_constructor_rejects_three_children():
    with pytest.raises(ValueError):
        IncreasingTree(1, (leaf(2), leaf(3), leaf(4)))


def test_validate_labels_and_strictness():
    validate(IncreasingTree(1, (leaf(3), leaf(2))), strict=True)
    with pytest.raises(ValueError):
        validate(IncreasingTree(1, (leaf(3), leaf(4))))
    with pytest.raises(ValueError):
        validate(IncreasingTree(1, (leaf(2),)), strict=True)


def test_perm_from_sequence_example():
    seq = AltSequence.from_values([Fraction(9, 10), Fraction(1, 10), Fraction(7, 10)])
    assert perm_from_sequence(seq).perm == (3, 1, 2)


def test_single_value():
    seq = AltSequence.from_values([Fraction(1, 2)])
    assert perm_from_sequence(seq).perm == (1,)
    assert tree_from_sequence(seq) == leaf(1)


def test_reversed_sequence_reverses_ranks():
    vals = [Fraction(9, 10), Fraction(1, 10), Fraction(7, 10), Fraction(2, 10), Fraction(8, 10)]
    p = perm_from_sequence(AltSequence.from_values(vals)).perm
    q = perm_from_sequence(AltSequence.from_values(vals[::-1])).perm
    assert q == p[::-1]
    AltPermutation(q)


def test_overlapping_intervals_are_ambiguous():
    seq = AltSequence.from_intervals([RealInterval(Fraction(1, 2), Fraction(3, 4)),
                                      RealInterval(Fraction(1, 4), Fraction(5, 8))])
    with pytest.raises(AmbiguousOrder):
        perm_from_sequence(seq)


def test_tree_from_sequence_example():
    seq = AltSequence.from_values([Fraction(9, 10), Fraction(1, 10), Fraction(7, 10)])
    assert tree_from_sequence(seq) == IncreasingTree(1, (leaf(3), leaf(2)))


def test_alt_permutation_validation():
    AltPermutation((3, 1, 2))
    with pytest.raises(ValueError):
        AltPermutation((1, 3, 2))
    with pytest.raises(ValueError):
        AltPermutation((3, 1, 1))


@pytest.mark.parametrize("n", [1, 3, 5, 7])
def test_bijection_alternating_to_trees(n):
    perms = list(alternating_permutations(n))
    trees = [tree_from_permutation(p) for p in perms]
    keys = {canonical_key(t) for t in trees}
    assert len(keys) == len(perms) == tangent_counts(n)[n]
    assert keys == {canonical_key(t) for t in enumerate_strict_trees(n)}
    for p, t in zip(perms, trees):
        validate(t, strict=True)
        assert tuple(inorder_labels(t)) == p


@pytest.mark.parametrize("n,count", [(1, 1), (3, 2), (7, 272)])
def test_enumerate_strict(n, count):
    trees = enumerate_strict_trees(n)
    assert len(trees) == count
    assert len({canonical_key(t) for t in trees}) == count


def test_enumerate_strict_limits():
    with pytest.raises(SizeTooLarge):
        enumerate_strict_trees(15)
    with pytest.raises(ValueError):
        enumerate_strict_trees(4)


def test_family_census_small():
    c2 = enumerate_family_trees(1, 1, 1, 2)
    assert [(canonical_key(t), w) for t, w in c2] == [("1(2)", 1)]
    assert sum(w for _, w in enumerate_family_trees(1, 1, 1, 3)) == 3
    strict = enumerate_family_trees(1, 0, 1, 3)
    assert sorted(canonical_key(t) for t, _ in strict) == sorted(
        canonical_key(t) for t in enumerate_strict_trees(3))


@pytest.mark.parametrize("abc", [(1, 1, 1), (2, 1, 3), (1, 3, 2), (1, 0, 1)])
@pytest.mark.parametrize("n", range(1, 7))
def test_family_census_matches_counts(abc, n):
    census = enumerate_family_trees(*abc, n)
    assert sum(w for _, w in census) == family_counts(*abc, n)[n]
    for t, w in census:
        leaves, unary, binary = t.arity_counts()
        assert w == abc[0] ** binary * abc[1] ** unary * abc[2] ** leaves


def test_family_census_limits():
    with pytest.raises(DomainError):
        enumerate_family_trees(Fraction(1, 2), 0, 1, 3)
    with pytest.raises(SizeTooLarge):
        enumerate_family_trees(1, 1, 1, 9)


def test_paren_examples():
    assert encode(leaf(1)) == "1"
    assert encode(IncreasingTree(1, (leaf(3), leaf(2)))) == "1(3,2)"
    assert encode(IncreasingTree(1, (leaf(2, 4),), 2)) == "1:2(2:4)"


def test_json_schema():
    obj = json.loads(encode(IncreasingTree(1, (leaf(2, 1),)), "json"))
    assert obj == {"label": 1, "children": [{"label": 2, "decoration": 1, "children": []}]}


def test_dot_render():
    text = encode(IncreasingTree(1, (leaf(3), leaf(2))), "dot")
    assert text.startswith("digraph tree {") and "n1 -> n3;" in text and "n1 -> n2;" in text


@st.composite
def random_trees(draw):
    seed = draw(st.integers(0, 10 ** 6))
    n = draw(st.sampled_from([1, 3, 21, 51]))
    t = recursive_tree(n, BitSource(seed))
    if draw(st.booleans()):
        # decorate some nodes to cover the ':' syntax
        nodes = list(t.nodes())
        labels = [x.label for x in nodes]
        index = {id(x): i for i, x in enumerate(nodes)}
        kids = [[index[id(c)] for c in x.children] for x in nodes]
        decos = [draw(st.one_of(st.none(), st.integers(1, 9))) for _ in nodes]
        t = build_tree(labels, kids, decos)
    return t


@given(random_trees())
def test_round_trips(t):
    assert decode(encode(t, "paren"), "paren") == t
    assert decode(encode(t, "json"), "json") == t
    assert strip_decorations(t).size == t.size


def test_json_round_trip_1000_trees_of_size_21():
    src = BitSource(21)
    for _ in range(1000):
        t = recursive_tree(21, src)
        assert decode(encode(t, "json"), "json") == t


@pytest.mark.parametrize("text", ["", "1(", "1(2,", "1)", "(1)", "1(2)3", "a"])
def test_paren_rejects_garbage(text):
    with pytest.raises(ValueError):
        decode(text)


def test_canonical_key_stable_and_injective():
    trees = enumerate_strict_trees(7)
    assert len({canonical_key(t) for t in trees}) == 272
    assert canonical_key(trees[5]) == canonical_key(decode(encode(trees[5])))


def test_deep_tree_no_recursion_limit():
    # a unary chain of 5000 nodes exercises the iterative code paths
    n = 5000
    t = build_tree(list(range(1, n + 1)), [[i + 1] for i in range(n - 1)] + [[]])
    assert decode(encode(t)) == t
    assert t.size == n
