"""Recursive-method sampler for strictly increasing binary trees.

The left subtree size of a tree of size ``n = 2l - 1`` is ``M = 2X - 1`` with
``P(X = k)`` proportional to

    f_k = (4**k - 1) zeta(2k) (4**(l-k) - 1) zeta(2(l-k)),

which is ``C(n-1, m) t_m t_{n-1-m}`` with constant factors removed.  Since
``f_1 >= f_k >= f_{l//2}`` and ``f_1 / f_{l//2} < 9``, a uniform proposal
``X`` accepted when ``U f_1 <= f_X`` needs fewer than 9 proposals on average.
The test is decided lazily: bits of ``U`` and precision of ``f_X / f_1`` are
added only until the two enclosures separate, so no ``t_n`` is ever computed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, List, Optional, Sequence, Tuple

import gmpy2

from .errors import EvenSize
from .exactnum import f_ratio_target, tangent_counts
from .rng_bits import LESS, BitSource, LazyUniform, lazy_compare, uniform_int
from .tree_model import IncreasingTree, build_tree

__all__ = [
    "MSampleStats",
    "exact_M_distribution",
    "sample_M",
    "random_subset",
    "sample_tree",
    "measure_complexity",
]


@dataclass
class MSampleStats:
    iterations: int = 0
    bits: int = 0
    refinements: int = 0
    calls: int = 0

    def merge(self, other: "MSampleStats") -> None:
        self.iterations += other.iterations
        self.bits += other.bits
        self.refinements += other.refinements
        self.calls += other.calls


def exact_M_distribution(n: int) -> List[Fraction]:
    """``P(M = m)`` for ``m = 0..n-1``, proportional to ``C(n-1, m) t_m t_{n-1-m}``."""
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")
    t = tangent_counts(n)
    w = [comb(n - 1, m) * t[m] * t[n - 1 - m] for m in range(n)]
    total = sum(w)
    return [Fraction(x, total) for x in w]


def sample_M(l: int, src: BitSource, stats: Optional[MSampleStats] = None) -> Tuple[int, MSampleStats]:
    """Left subtree size ``m = 2X - 1`` for a tree of size ``2l - 1``."""
    if l < 2:
        raise ValueError("l must be at least 2")
    st = MSampleStats(calls=1)
    start = src.bits_consumed
    while True:
        st.iterations += 1
        x = uniform_int(src, l - 1) + 1
        target = f_ratio_target(x, l)

        def counted(level, _t=target):
            if level:
                st.refinements += 1
            return _t(level)

        if lazy_compare(LazyUniform(src), counted) == LESS:
            break
    st.bits = src.bits_consumed - start
    if stats is not None:
        stats.merge(st)
    return 2 * x - 1, st


def random_subset(items: Sequence[int], k: int, src: BitSource) -> Tuple[List[int], List[int]]:
    """Uniform ``k``-subset of ``items`` and its complement, both in input order.

    A uniform rank below ``C(N, k)`` is drawn lazily and unranked, so the cost
    is ``log2 C(N, k) + O(1)`` random bits.
    """
    N = len(items)
    if not 0 <= k <= N:
        raise ValueError("subset size out of range")
    flip = k > N - k
    j = N - k if flip else k
    # mpz keeps the O(N) unranking steps cheap when C(N, j) has thousands of bits
    B = gmpy2.comb(N, j)
    r = gmpy2.mpz(uniform_int(src, int(B)))
    chosen: List[int] = []
    other: List[int] = []
    rem = N
    i = 0
    while j and j < rem:
        inc = B * j // rem
        if r < inc:
            chosen.append(items[i])
            B = inc
            j -= 1
        else:
            r -= inc
            other.append(items[i])
            B = B - inc
        rem -= 1
        i += 1
    if j:
        chosen.extend(items[i:])
    else:
        other.extend(items[i:])
    return (other, chosen) if flip else (chosen, other)


def _leftmost_split(items: Sequence[int], k: int, src: BitSource):
    return list(items[:k]), list(items[k:])


SplitFn = Callable[[Sequence[int], int, BitSource], Tuple[List[int], List[int]]]


def sample_tree(n: int, src: BitSource, stats: Optional[MSampleStats] = None,
                split: SplitFn = random_subset) -> IncreasingTree:
    """Uniform strictly increasing binary tree of odd size ``n``.

    The root takes the smallest available label, the left subtree gets a
    uniform subset of the remaining labels.  Runs with an explicit stack.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2 == 0:
        raise EvenSize(f"no strictly increasing binary tree has even size {n}")
    labels_out: List[int] = []
    kids: List[List[int]] = []
    labels_out.append(0)
    kids.append([])
    tasks = [(0, list(range(1, n + 1)))]
    while tasks:
        idx, labels = tasks.pop()
        labels_out[idx] = labels[0]
        s = len(labels)
        if s == 1:
            continue
        m, _ = sample_M((s + 1) // 2, src, stats)
        left, right = split(labels[1:], m, src)
        li, ri = len(labels_out), len(labels_out) + 1
        labels_out.extend((0, 0))
        kids.extend(([], []))
        kids[idx] = [li, ri]
        tasks.append((ri, right))
        tasks.append((li, left))
    return build_tree(labels_out, kids)


def measure_complexity(sizes: Sequence[int], reps: int, src: BitSource) -> List[dict]:
    """Mean time, random bits and M-sampler effort per tree for each size."""
    rows = []
    for n in sizes:
        st = MSampleStats()
        t0 = time.perf_counter()
        b0 = src.bits_consumed
        for _ in range(reps):
            sample_tree(n, src, st)
        elapsed = time.perf_counter() - t0
        bits = (src.bits_consumed - b0) / reps
        rows.append({
            "size": n,
            "mean_ms": 1000 * elapsed / reps,
            "mean_bits": bits,
            "bits_per_nlogn": bits / (n * math.log2(n)) if n > 1 else 0.0,
            "mean_M_iterations": st.iterations / st.calls if st.calls else 0.0,
            "mean_M_bits": st.bits / st.calls if st.calls else 0.0,
            "refinements": st.refinements,
        })
    return rows
