from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from incrtree.errors import EvenSize
from incrtree.recursive import (MSampleStats, _leftmost_split, exact_M_distribution,
                                measure_complexity, random_subset, sample_M, sample_tree)
from incrtree.rng_bits import BitSource
from incrtree.tree_model import canonical_key, enumerate_strict_trees, validate


def test_exact_m_small():
    assert exact_M_distribution(3) == [0, 1, 0]
    d5 = exact_M_distribution(5)
    assert d5[1] == d5[3] == Fraction(1, 2)
    d7 = exact_M_distribution(7)
    assert (d7[1], d7[3], d7[5]) == (Fraction(6, 17), Fraction(5, 17), Fraction(6, 17))


@pytest.mark.parametrize("n", [9, 21, 129])
def test_exact_m_even_sizes_have_zero_mass(n):
    d = exact_M_distribution(n)
    assert sum(d) == 1
    assert all(d[m] == 0 for m in range(0, n, 2))
    assert d == d[::-1]


def test_sample_m_l2_always_one():
    src = BitSource(0)
    for _ in range(200):
        m, st_ = sample_M(2, src)
        assert m == 1 and st_.iterations >= 1


def test_sample_m_l3_balanced():
    src = BitSource(1)
    c = Counter(sample_M(3, src)[0] for _ in range(10000))
    assert set(c) == {1, 3}
    assert abs(c[1] - 5000) <= 150


@pytest.mark.parametrize("n", [7, 9, 21, 41])
def test_sample_m_law(n):
    src = BitSource(n)
    c = Counter(sample_M((n + 1) // 2, src)[0] for _ in range(10000))
    exact = exact_M_distribution(n)
    ms = list(range(1, n - 1, 2))
    assert set(c) <= set(ms)
    expected = [float(exact[m]) * 10000 for m in ms]
    assert sps.chisquare([c[m] for m in ms], expected).pvalue > 1e-3


def test_sample_m_iterations_at_l500():
    src = BitSource(500)
    st_ = MSampleStats()
    for _ in range(2000):
        sample_M(500, src, st_)
    assert st_.iterations / st_.calls <= 9
    assert st_.calls == 2000


def test_sample_m_resolves_within_64_bits_at_l500():
    src = BitSource(5000)
    worst = 0
    for _ in range(10000):
        _, st_ = sample_M(500, src)
        worst = max(worst, st_.bits / st_.iterations)
    assert worst <= 64


def test_random_subset_uniform_position():
    src = BitSource(3)
    c = Counter()
    for _ in range(8000):
        left, right = random_subset([2, 3, 4, 5], 1, src)
        assert len(left) == 1 and sorted(left + right) == [2, 3, 4, 5]
        c[left[0]] += 1
    for x in (2, 3, 4, 5):
        assert abs(c[x] - 2000) <= 3 * (8000 * 0.25 * 0.75) ** 0.5


def test_random_subset_all_subsets_uniform():
    src = BitSource(4)
    c = Counter(tuple(random_subset(list(range(6)), 3, src)[0]) for _ in range(20000))
    assert len(c) == 20
    assert sps.chisquare(list(c.values())).pvalue > 1e-3


@given(st.integers(0, 60), st.data())
@settings(max_examples=80)
def test_random_subset_partition(N, data):
    k = data.draw(st.integers(0, N))
    items = list(range(100, 100 + N))
    left, right = random_subset(items, k, BitSource(N * 7 + k))
    assert len(left) == k
    assert sorted(left + right) == items
    assert left == sorted(left) and right == sorted(right)


def test_leftmost_split_is_deterministic():
    assert _leftmost_split([4, 5, 6], 1, None) == ([4], [5, 6])


def test_sample_tree_small():
    assert canonical_key(sample_tree(1, BitSource(0))) == "1"
    with pytest.raises(EvenSize):
        sample_tree(6, BitSource(0))


def test_sample_tree_n5_uniform():
    src = BitSource(5)
    keys = [canonical_key(t) for t in enumerate_strict_trees(5)]
    c = Counter(canonical_key(sample_tree(5, src)) for _ in range(16000))
    assert set(c) == set(keys)
    assert sps.chisquare([c[k] for k in keys]).pvalue > 1e-3


def test_large_tree_valid_and_iterative():
    t = sample_tree(20001, BitSource(1))
    validate(t, strict=True)


def test_measure_complexity_fields():
    rows = measure_complexity([101, 301], 5, BitSource(2))
    assert [r["size"] for r in rows] == [101, 301]
    for r in rows:
        assert r["mean_M_iterations"] <= 9
        assert 0 < r["bits_per_nlogn"] < 8
