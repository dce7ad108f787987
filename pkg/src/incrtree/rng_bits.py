"""Seeded random bit streams, lazy uniforms and adaptive comparisons.

Every random decision in the package is paid for in single bits drawn from a
:class:`BitSource`, so the number of random bits a sampler consumes can be
measured exactly.

The bit stream is produced by MT19937 (``random.Random``) seeded with a
BLAKE2b digest of ``(seed, stream)``.  Each 64-bit output word is consumed
most significant bit first.  Both algorithms are fixed and platform
independent, which makes seeded output reproducible byte for byte.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from typing import Callable, Tuple, Union

from .errors import RefinementLimitExceeded

__all__ = [
    "PRNG_VERSION",
    "DEFAULT_REFINEMENT_CAP",
    "LESS",
    "GREATER",
    "BitSource",
    "LazyUniform",
    "fresh_uniform",
    "refine",
    "lazy_compare",
    "uniform_int",
    "constant_target",
]

PRNG_VERSION = "mt19937-blake2b-v1"
DEFAULT_REFINEMENT_CAP = 4096

LESS = -1
GREATER = 1

_WORD = 64


def _derive_seed(seed: int, stream: int) -> int:
    material = f"{PRNG_VERSION}:{seed}:{stream}".encode()
    return int.from_bytes(hashlib.blake2b(material, digest_size=32).digest(), "big")


class BitSource:
    """Deterministic stream of random bits with exact consumption accounting.

    A source is not thread safe.  Independent parallel streams are obtained
    with :meth:`derive` (or by passing a different ``stream`` id).
    """

    def __init__(self, seed: int = 0, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        self._rng = random.Random(_derive_seed(self.seed, self.stream))
        self._buf = 0
        self._nbuf = 0
        self.bits_consumed = 0

    def derive(self, stream: int) -> "BitSource":
        return BitSource(self.seed, stream)

    def take(self, k: int) -> int:
        """Return the next ``k`` bits as an integer (first bit most significant)."""
        if k <= 0:
            return 0
        while self._nbuf < k:
            self._buf = (self._buf << _WORD) | self._rng.getrandbits(_WORD)
            self._nbuf += _WORD
        self._nbuf -= k
        out = self._buf >> self._nbuf
        self._buf &= (1 << self._nbuf) - 1
        self.bits_consumed += k
        return out

    def bit(self) -> int:
        return self.take(1)

    def __repr__(self) -> str:
        return (f"BitSource(seed={self.seed}, stream={self.stream}, "
                f"bits_consumed={self.bits_consumed})")


class LazyUniform:
    """A uniform real in [0, 1) known through a growing prefix of its binary digits.

    After ``p`` bits with value ``num`` the uniform lies in the dyadic interval
    ``[num / 2**p, (num + 1) / 2**p)``.
    """

    __slots__ = ("src", "num", "p")

    def __init__(self, src: BitSource):
        self.src = src
        self.num = 0
        self.p = 0

    def refine(self, p: int) -> Tuple[Fraction, Fraction]:
        if p > self.p:
            d = p - self.p
            self.num = (self.num << d) | self.src.take(d)
            self.p = p
        return self.interval()

    def extend(self, d: int = 1) -> None:
        """Append ``d`` fresh bits."""
        self.num = (self.num << d) | self.src.take(d)
        self.p += d

    def interval(self) -> Tuple[Fraction, Fraction]:
        return Fraction(self.num, 1 << self.p), Fraction(self.num + 1, 1 << self.p)

    @property
    def bit_prefix(self) -> str:
        return format(self.num, f"0{self.p}b") if self.p else ""

    def __repr__(self) -> str:
        return f"LazyUniform(prefix={self.bit_prefix!r})"


def fresh_uniform(src: BitSource) -> LazyUniform:
    return LazyUniform(src)


def refine(u: LazyUniform, p: int) -> Tuple[Fraction, Fraction]:
    """Extend ``u`` to ``p`` bits and return its dyadic interval.

    Asking for fewer bits than ``u`` already holds is a no-op.
    """
    return u.refine(p)


# A comparison target yields, for level 0, 1, 2, ..., nested enclosures
# ``(lo_num, hi_num, den)`` of a real number: lo_num/den <= x <= hi_num/den.
Enclosure = Tuple[int, int, int]
Target = Union[int, Fraction, Callable[[int], Enclosure]]


def constant_target(x: Union[int, Fraction]) -> Callable[[int], Enclosure]:
    q = Fraction(x)
    enc = (q.numerator, q.numerator, q.denominator)
    return lambda level: enc


def lazy_compare(u: LazyUniform, target: Target,
                 cap: int = DEFAULT_REFINEMENT_CAP) -> int:
    """Decide whether the ideal value of ``u`` is below or above ``target``.

    Bits of ``u`` and levels of the target are added alternately, always
    refining whichever enclosure is wider, until the two are disjoint.
    Returns :data:`LESS` or :data:`GREATER`.  Raises
    :class:`RefinementLimitExceeded` once ``u`` would need more than ``cap``
    bits or the target more than ``cap`` levels, which only happens for ties
    (a probability-zero event) or a target whose enclosures never shrink.
    """
    if not callable(target):
        target = constant_target(target)
    level = 0
    lo, hi, den = target(level)
    while True:
        p = u.p
        if (u.num + 1) * den <= lo << p:
            return LESS
        if u.num * den >= hi << p:
            return GREATER
        # u is wider than the target: den / 2**p > (hi - lo)
        if den > (hi - lo) << p:
            if p >= cap:
                raise RefinementLimitExceeded(
                    f"uniform refined to {p} bits without separating from target")
            u.extend(1)
        else:
            level += 1
            if level > cap:
                raise RefinementLimitExceeded(
                    f"target refined {cap} times without separating from the uniform")
            lo, hi, den = target(level)


def uniform_int(src: BitSource, k: int) -> int:
    """Exactly uniform integer in ``{0, ..., k-1}``.

    The integer is ``floor(k * U)`` for a lazy uniform ``U`` that is refined
    only until the floor is determined, which costs ``log2(k) + 2`` bits on
    average and zero bits for ``k == 1``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return 0
    p = (k - 1).bit_length()
    a = src.take(p)
    while True:
        j = (a * k) >> p
        if j == ((a + 1) * k - 1) >> p:
            return j
        a = (a << 1) | src.take(1)
        p += 1
