"""Weighted unary-binary increasing trees, ``T' = a T**2 + b T + c``.

A tree of size ``n`` has probability proportional to
``a**#binary * b**#unary * c**#leaves``.  The root is unary with probability
``b t_{n-1} / t_n``; otherwise the left subtree size ``m`` is drawn with
probability proportional to ``C(n-1, m) t_m t_{n-1-m}`` and the labels are
split uniformly, exactly as for strict binary trees.

Both random choices are made by comparing one lazy uniform against certified
enclosures of the relevant ratios.  Counts up to :data:`EXACT_CUTOFF` are exact
rationals; larger ones come from the pole expansion of ``T`` and are refined
(more terms, more bits) only when a comparison is still undecided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

from .errors import DomainError, EvenSize, UnsupportedFamily
from .exactnum import (RealInterval, arctan_interval, family_counts, family_t_interval,
                       pi_interval, sqrt_interval)
from .recursive import random_subset
from .rng_bits import LESS, BitSource, LazyUniform, lazy_compare, uniform_int
from .tree_model import IncreasingTree, build_tree

__all__ = [
    "EXACT_CUTOFF",
    "FamilySpec",
    "FamilyStats",
    "make_spec",
    "parse_weight",
    "t_interval",
    "unary_root_prob",
    "split_weights",
    "sample_M_family",
    "sample_tree",
    "asymptotic_interval",
]

EXACT_CUTOFF = 64


def parse_weight(text) -> Fraction:
    """Parse ``"p/q"``, an integer string or a number into a Fraction."""
    try:
        return Fraction(text) if not isinstance(text, float) else Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot read weight {text!r}") from exc


@dataclass(frozen=True)
class FamilySpec:
    a: Fraction
    b: Fraction
    c: Fraction
    alpha: Fraction
    gamma2: Fraction

    @property
    def strict(self) -> bool:
        return self.b == 0

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


def make_spec(a, b, c) -> FamilySpec:
    """Validate weights and complete the square: ``a T**2 + b T + c = a (T + alpha)**2 + a gamma**2``."""
    a, b, c = parse_weight(a), parse_weight(b), parse_weight(c)
    if a <= 0 or c <= 0:
        raise DomainError("family weights need a > 0 and c > 0")
    if b < 0:
        raise DomainError("family weight b must be non-negative")
    alpha = b / (2 * a)
    gamma2 = c / a - alpha * alpha
    if gamma2 <= 0:
        raise UnsupportedFamily(
            f"c/a - (b/2a)^2 = {gamma2} is not positive; only the +a*gamma^2 case is supported")
    return FamilySpec(a, b, c, alpha, gamma2)


@dataclass
class FamilyStats:
    unary: int = 0
    binary: int = 0
    refinements: int = 0
    bits: int = 0


def _level_bits(level: int) -> int:
    return 64 << level


@lru_cache(maxsize=4096)
def t_interval(spec: FamilySpec, n: int, level: int = 0) -> RealInterval:
    """Enclosure of ``t_n``: exact up to the cutoff, from the series above it."""
    if n <= EXACT_CUTOFF:
        return RealInterval.point(_exact(spec)[n])
    return family_t_interval(spec, n, terms=1 + level, bits=_level_bits(level))


@lru_cache(maxsize=64)
def _exact(spec: FamilySpec) -> Tuple[Fraction, ...]:
    return tuple(family_counts(spec.a, spec.b, spec.c, EXACT_CUTOFF))


def _ratio(num: RealInterval, den: RealInterval) -> RealInterval:
    lo = num.lo / den.hi if den.hi > 0 else Fraction(0)
    hi = num.hi / den.lo if den.lo > 0 else Fraction(1)
    return RealInterval(max(lo, Fraction(0)), min(hi, Fraction(1)))


def unary_root_prob(spec: FamilySpec, n: int, effort: int = 0) -> RealInterval:
    """Enclosure of ``b t_{n-1} / t_n``, clipped to ``[0, 1]``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if spec.b == 0:
        return RealInterval(0, 0)
    num = t_interval(spec, n - 1, effort) * spec.b
    return _ratio(num, t_interval(spec, n, effort))


@lru_cache(maxsize=1024)
def split_weights(spec: FamilySpec, n: int, level: int = 0) -> Tuple[RealInterval, ...]:
    """Cumulative cut points ``P(M <= m)`` for ``m = 0..n-2`` of the binary split.

    Each cut is ``S_m / (S_m + R_m)`` with ``S_m`` the prefix and ``R_m`` the
    remaining sum of the weights ``C(n-1, m) t_m t_{n-1-m}``; pairing lower
    prefix with upper remainder keeps the enclosure valid.
    """
    if n < 3:
        raise ValueError("a binary split needs n >= 3")
    t = [t_interval(spec, m, level) for m in range(n)]
    w = [t[m] * t[n - 1 - m] * math.comb(n - 1, m) for m in range(n)]
    lo = [x.lo for x in w]
    hi = [x.hi for x in w]
    suffix_lo = [Fraction(0)] * (n + 1)
    suffix_hi = [Fraction(0)] * (n + 1)
    for m in range(n - 1, -1, -1):
        suffix_lo[m] = suffix_lo[m + 1] + lo[m]
        suffix_hi[m] = suffix_hi[m + 1] + hi[m]
    cuts = []
    plo = phi = Fraction(0)
    for m in range(n - 1):
        plo += lo[m]
        phi += hi[m]
        c_lo = plo / (plo + suffix_hi[m + 1]) if plo else Fraction(0)
        c_hi = phi / (phi + suffix_lo[m + 1]) if suffix_lo[m + 1] else Fraction(1)
        cuts.append(RealInterval(c_lo, c_hi))
    return tuple(cuts)


def _provider(get, stats: Optional[FamilyStats]):
    def target(level):
        if level and stats is not None:
            stats.refinements += 1
        iv = get(level)
        lo, hi = iv.lo, iv.hi
        return (lo.numerator * hi.denominator, hi.numerator * lo.denominator,
                lo.denominator * hi.denominator)
    return target


def sample_M_family(spec: FamilySpec, n: int, src: BitSource,
                    stats: Optional[FamilyStats] = None) -> int:
    """Left subtree size of a binary root, by lazy inversion of the cumulative law.

    One uniform ``U`` is compared against the cut points by bisection; the
    answer is the first ``m`` whose cut exceeds ``U``.
    """
    if n < 3:
        raise ValueError("a binary split needs n >= 3")
    u = LazyUniform(src)
    lo, hi = 0, n - 1  # answer lies in [lo, hi]; cut n-1 is 1
    while lo < hi:
        mid = (lo + hi) // 2
        target = _provider(lambda lv, _m=mid: split_weights(spec, n, lv)[_m], stats)
        if lazy_compare(u, target) == LESS:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _decoration(weight: Fraction, src: BitSource) -> Optional[int]:
    if weight.denominator == 1 and weight > 0:
        return uniform_int(src, int(weight)) + 1
    return None


def sample_tree(spec: FamilySpec, n: int, src: BitSource,
                stats: Optional[FamilyStats] = None) -> IncreasingTree:
    """Weighted random tree of size ``n`` from the family ``spec``.

    Decorations (colours) are attached to leaves when ``c`` is a positive
    integer and to unary nodes when ``b`` is; otherwise nodes carry none.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if spec.b == 0 and n % 2 == 0:
        raise EvenSize(f"a family without unary nodes has no tree of even size {n}")
    start = src.bits_consumed
    labels_out: List[int] = [0]
    kids: List[List[int]] = [[]]
    decos: List[Optional[int]] = [None]
    tasks = [(0, list(range(1, n + 1)))]
    while tasks:
        idx, labels = tasks.pop()
        labels_out[idx] = labels[0]
        s = len(labels)
        if s == 1:
            decos[idx] = _decoration(spec.c, src)
            continue
        unary = False
        if spec.b > 0:
            target = _provider(lambda lv, _s=s: unary_root_prob(spec, _s, lv), stats)
            unary = lazy_compare(LazyUniform(src), target) == LESS
        if unary:
            if stats is not None:
                stats.unary += 1
            decos[idx] = _decoration(spec.b, src)
            ci = len(labels_out)
            labels_out.append(0)
            kids.append([])
            decos.append(None)
            kids[idx] = [ci]
            tasks.append((ci, labels[1:]))
            continue
        if stats is not None:
            stats.binary += 1
        m = sample_M_family(spec, s, src, stats)
        left, right = random_subset(labels[1:], m, src)
        li, ri = len(labels_out), len(labels_out) + 1
        labels_out.extend((0, 0))
        kids.extend(([], []))
        decos.extend((None, None))
        kids[idx] = [li, ri]
        tasks.append((ri, right))
        tasks.append((li, left))
    if stats is not None:
        stats.bits += src.bits_consumed - start
    return build_tree(labels_out, kids, decos)


def asymptotic_interval(spec: FamilySpec, n: int, bits: int = 128) -> RealInterval:
    """Enclosure of ``n! a**n gamma**(n+1) / (pi/2 - arctan(alpha/gamma))**(n+1)``."""
    if n < 1:
        raise ValueError("n must be positive")
    wb = bits + 16 + 2 * n.bit_length()
    gamma = sqrt_interval(spec.gamma2, wb)
    theta = (arctan_interval((RealInterval.point(spec.alpha) / gamma).round_out(wb), wb)
             if spec.alpha else RealInterval(0, 0))
    x = (pi_interval(wb) * Fraction(1, 2) - theta).round_out(wb)
    e = n + 1
    core = ((gamma / x).round_out(wb)) ** e
    return (core * (math.factorial(n) * spec.a ** n)).round_out(bits)
