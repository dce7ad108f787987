"""Exact counts and certified real enclosures.

Two representations are used side by side:

* :class:`RealInterval` has :class:`fractions.Fraction` endpoints and is the
  public currency for enclosures of reals.
* Hot paths (samplers, bulk certification) work with fixed-point integer
  pairs ``(lo, hi)`` meaning ``[lo / 2**bits, hi / 2**bits]``.  They are still
  exact rational bounds, just with a dyadic denominator fixed in advance.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple, Union

from .errors import DomainError, RefinementLimitExceeded

Number = Union[int, Fraction]

__all__ = [
    "RealInterval",
    "tangent_counts",
    "family_counts",
    "pi_fixed",
    "pi_interval",
    "sqrt_interval",
    "arctan_interval",
    "zeta_even_interval",
    "zeta_fixed",
    "g_fixed",
    "f_interval",
    "f_ratio_target",
    "certify_weight_bounds",
    "family_t_interval",
    "strict_asymptotic",
]


# ---------------------------------------------------------------------------
# rounding helpers
# ---------------------------------------------------------------------------

def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _round(q: Fraction, bits: int, up: bool) -> Fraction:
    """Round ``q`` to ``bits`` significant bits, downwards or upwards."""
    if q == 0:
        return q
    n, d = q.numerator, q.denominator
    shift = bits - (abs(n).bit_length() - d.bit_length())
    if shift >= 0:
        m = -((-n << shift) // d) if up else (n << shift) // d
        return Fraction(m, 1 << shift)
    dd = d << -shift
    m = -((-n) // dd) if up else n // dd
    return Fraction(m << -shift)


# ---------------------------------------------------------------------------
# interval type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealInterval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: Number) -> "RealInterval":
        return cls(x, x)

    @classmethod
    def from_fixed(cls, lo: int, hi: int, bits: int) -> "RealInterval":
        return cls(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, RealInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def disjoint(self, other: "RealInterval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def intersect(self, other: "RealInterval") -> "RealInterval":
        return RealInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def round_out(self, bits: int) -> "RealInterval":
        """Widen to endpoints with at most ``bits`` significant bits."""
        return RealInterval(_round(self.lo, bits, False), _round(self.hi, bits, True))

    @staticmethod
    def _lift(x) -> "RealInterval":
        return x if isinstance(x, RealInterval) else RealInterval(x, x)

    def __neg__(self):
        return RealInterval(-self.hi, -self.lo)

    def __add__(self, other):
        o = self._lift(other)
        return RealInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return RealInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if self.lo >= 0 and o.lo >= 0:
            return RealInterval(self.lo * o.lo, self.hi * o.hi)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RealInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def reciprocal(self) -> "RealInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return RealInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        if k == 0:
            return RealInterval(1, 1)
        if self.lo >= 0:
            return RealInterval(self.lo ** k, self.hi ** k)
        if self.hi <= 0:
            a, b = self.lo ** k, self.hi ** k
            return RealInterval(min(a, b), max(a, b))
        if k % 2:
            return RealInterval(self.lo ** k, self.hi ** k)
        return RealInterval(0, max(self.lo ** k, self.hi ** k))

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"RealInterval({float(self.lo)!r}, {float(self.hi)!r})"


# ---------------------------------------------------------------------------
# exact counts
# ---------------------------------------------------------------------------

_TANGENT: List[int] = [0]


def tangent_counts(n_max: int) -> List[int]:
    """Counts ``t_0 .. t_{n_max}`` of strictly increasing binary trees.

    Uses ``t_{n+1} = sum_m C(n, m) t_m t_{n-m} + [n == 0]`` from ``T' = T**2 + 1``.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    t = _TANGENT
    while len(t) <= n_max:
        n = len(t) - 1
        s = 1 if n == 0 else 0
        c = 1
        for m in range(n + 1):
            s += c * t[m] * t[n - m]
            c = c * (n - m) // (m + 1)
        t.append(s)
    return t[: n_max + 1]


@lru_cache(maxsize=64)
def _family_counts(a: Fraction, b: Fraction, c: Fraction, n_max: int) -> Tuple[Fraction, ...]:
    t = [Fraction(0)]
    for n in range(n_max):
        s = Fraction(0)
        binom = 1
        for m in range(n + 1):
            if t[m] and t[n - m]:
                s += binom * t[m] * t[n - m]
            binom = binom * (n - m) // (m + 1)
        v = a * s + b * t[n]
        if n == 0:
            v += c
        t.append(v)
    return tuple(t)


def family_counts(a: Number, b: Number, c: Number, n_max: int) -> List[Fraction]:
    """Weighted counts ``t_0 .. t_{n_max}`` for ``T' = a T**2 + b T + c``.

    ``t_n`` sums ``a**#binary * b**#unary * c**#leaves`` over the plane
    unary-binary increasing trees of size ``n``.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a <= 0 or c <= 0:
        raise DomainError("family weights need a > 0 and c > 0")
    if b < 0:
        raise DomainError("family weight b must be non-negative")
    return list(_family_counts(a, b, c, n_max))


# ---------------------------------------------------------------------------
# certified elementary constants
# ---------------------------------------------------------------------------

def _atan_inv_scaled(m: int, scale: int) -> Tuple[int, int]:
    """Truncated ``atan(1/m) * 2**scale`` and an absolute error bound."""
    s = 0
    k = 0
    power = m
    m2 = m * m
    one = 1 << scale
    while True:
        term = one // ((2 * k + 1) * power)
        if term == 0:
            break
        s += -term if k & 1 else term
        k += 1
        power *= m2
    # k floor errors below one unit each, plus the alternating tail below one unit
    return s, k + 1


@lru_cache(maxsize=128)
def pi_fixed(bits: int) -> Tuple[int, int]:
    """Integers ``lo, hi`` with ``lo <= pi * 2**bits <= hi`` (Machin's formula)."""
    guard = 16 + max(bits, 1).bit_length()
    scale = bits + guard
    a, ea = _atan_inv_scaled(5, scale)
    b, eb = _atan_inv_scaled(239, scale)
    s = 16 * a - 4 * b
    err = 16 * ea + 4 * eb
    return (s - err) >> guard, _ceil_div(s + err, 1 << guard)


def pi_interval(bits: int = 128) -> RealInterval:
    lo, hi = pi_fixed(bits)
    return RealInterval.from_fixed(lo, hi, bits)


def _sqrt_bounds(q: Fraction, bits: int) -> Tuple[int, int]:
    n, d = q.numerator, q.denominator
    x = n << (2 * bits)
    lo = math.isqrt(x // d)
    hi = math.isqrt(_ceil_div(x, d))
    if hi * hi * d != x:
        hi += 1
    return lo, hi


def sqrt_interval(x, bits: int = 128) -> RealInterval:
    """Enclosure of ``sqrt(x)`` for a non-negative rational or interval."""
    iv = RealInterval._lift(x if isinstance(x, RealInterval) else Fraction(x))
    if iv.lo < 0:
        raise DomainError("sqrt of a negative number")
    lo, _ = _sqrt_bounds(iv.lo, bits)
    _, hi = _sqrt_bounds(iv.hi, bits)
    return RealInterval.from_fixed(lo, hi, bits)


def _arctan_scaled(x: Fraction, bits: int) -> Tuple[int, int]:
    """Fixed-point bounds of ``arctan(x)`` for rational ``0 <= x <= 1``.

    Euler's series ``sum 4**n (n!)**2 / (2n+1)! * x**(2n+1) / (1+x**2)**(n+1)``
    has positive terms with ratio at most ``y = x**2 / (1 + x**2)``, so the
    tail after the last kept term ``t`` is at most ``t * x**2``.
    """
    if x == 0:
        return 0, 0
    guard = 20
    scale = bits + guard
    p, q = x.numerator, x.denominator
    den = p * p + q * q
    # t_0 = x / (1 + x^2) = p q / den
    tl = ((p * q) << scale) // den
    th = _ceil_div((p * q) << scale, den)
    sl, sh = tl, th
    n = 0
    while th > 1:
        num = (2 * n + 2) * p * p
        dd = (2 * n + 3) * den
        tl = (tl * num) // dd
        th = _ceil_div(th * num, dd)
        sl += tl
        sh += th
        n += 1
    sh += _ceil_div(th * p * p, q * q) + 1
    return sl >> guard, _ceil_div(sh, 1 << guard)


def _arctan_point(x: Fraction, bits: int) -> RealInterval:
    if x < 0:
        return -_arctan_point(-x, bits)
    if x <= 1:
        lo, hi = _arctan_scaled(x, bits)
        return RealInterval.from_fixed(lo, hi, bits)
    lo, hi = _arctan_scaled(1 / x, bits)
    return pi_interval(bits + 1) * Fraction(1, 2) - RealInterval.from_fixed(lo, hi, bits)


def arctan_interval(x, bits: int = 128) -> RealInterval:
    """Enclosure of ``arctan`` over a rational point or interval."""
    iv = RealInterval._lift(x if isinstance(x, RealInterval) else Fraction(x))
    return RealInterval(_arctan_point(iv.lo, bits).lo, _arctan_point(iv.hi, bits).hi)


# ---------------------------------------------------------------------------
# zeta(2k) and f_k
# ---------------------------------------------------------------------------

def zeta_even_interval(k: int, terms: int) -> RealInterval:
    """``[sum_{i<=terms} i**-2k, same + terms**(1-2k) / (2k-1)]``, which contains zeta(2k)."""
    if k < 1 or terms < 1:
        raise ValueError("k and terms must be positive")
    s = 2 * k
    lo = sum(Fraction(1, i ** s) for i in range(1, terms + 1))
    return RealInterval(lo, lo + Fraction(1, (s - 1) * terms ** (s - 1)))


# the direct sum is used while it needs at most 2**12 terms
_DIRECT_SUM_LOG2 = 12


def _central_binomial_series(power: int, scale: int) -> Tuple[int, int]:
    """Bounds of ``sum_{n>=1} 2**scale / (n**power * C(2n, n))``.

    Consecutive terms shrink by more than a factor 4, so once a floored term
    is zero the remaining tail is below 4/3 of a unit.
    """
    one = 1 << scale
    s = 0
    n = 1
    c = 2
    count = 0
    while True:
        term = one // (n ** power * c)
        if term == 0:
            break
        s += term
        count += 1
        c = c * 2 * (2 * n + 1) // (n + 1)
        n += 1
    return s, s + count + 2


def _zeta_alternating(s: int, scale: int) -> Tuple[int, int]:
    """Bounds of ``zeta(s) * 2**scale`` for integer ``s >= 2`` by an accelerated alternating series.

    With ``d_k = sum_{i<=k} u_i`` and ``u_i = n (n+i-1)! 4**i / ((n-i)! (2i)!)``,
    ``zeta(s) (1 - 2**(1-s)) d_n = sum_{k<n} (-1)**k (d_n - d_k) / (k+1)**s + e``
    where ``|e| <= 3 d_n / (3 + sqrt 8)**n``.  Since ``3 + sqrt 8 > 2**2.5``,
    ``n = ceil((2 scale + 8) / 5)`` terms make ``|e| * 2**scale <= d_n``.
    """
    n = -(-(2 * scale + 8) // 5)
    d = []
    u = 1
    acc = 0
    for i in range(n + 1):
        acc += u
        d.append(acc)
        # u_{i+1} / u_i = 2 (n+i)(n-i) / ((2i+1)(i+1)); the division is exact
        u = u * 2 * (n + i) * (n - i) // ((2 * i + 1) * (i + 1))
    dn = d[n]
    one = 1 << scale
    lo = hi = 0
    for k in range(n):
        c = (dn - d[k]) * one
        p = (k + 1) ** s
        if k % 2 == 0:
            lo += c // p
            hi += _ceil_div(c, p)
        else:
            lo -= _ceil_div(c, p)
            hi -= c // p
    lo -= dn
    hi += dn
    # divide by d_n (1 - 2**(1-s)) = d_n (2**(s-1) - 1) / 2**(s-1)
    q = dn * ((1 << (s - 1)) - 1)
    return (lo << (s - 1)) // q, _ceil_div(hi << (s - 1), q)


@lru_cache(maxsize=1 << 16)
def zeta_fixed(k: int, bits: int) -> Tuple[int, int]:
    """Integers ``lo, hi`` with ``lo <= zeta(2k) * 2**bits <= hi``.

    ``zeta(2) = 3 sum 1/(n^2 C(2n,n))`` and ``zeta(4) = 36/17 sum 1/(n^4 C(2n,n))``
    converge geometrically.  Larger ``k`` use the direct sum with the tail
    squeezed between ``int_{T+1}`` and ``int_{T+1/2}`` of ``x**-2k`` while that
    needs few terms, and an accelerated alternating series otherwise.
    """
    if k < 1:
        raise ValueError("k must be positive")
    guard = 24
    scale = bits + guard
    if k == 1:
        sl, sh = _central_binomial_series(2, scale)
        lo, hi = 3 * sl, 3 * sh
    elif k == 2:
        sl, sh = _central_binomial_series(4, scale)
        lo, hi = (36 * sl) // 17, _ceil_div(36 * sh, 17)
    elif bits / (2 * k) > _DIRECT_SUM_LOG2:
        lo, hi = _zeta_alternating(2 * k, scale)
    else:
        s = 2 * k
        # direct-sum tail width is about T**-s / 2
        T = max(2, math.ceil(2.0 ** (bits / s)) + 1)
        one = 1 << scale
        lo = 0
        hi = 0
        for i in range(1, T + 1):
            p = i ** s
            lo += one // p
            hi += _ceil_div(one, p)
        lo += one // ((s - 1) * (T + 1) ** (s - 1))
        hi += _ceil_div(one << (s - 1), (s - 1) * (2 * T + 1) ** (s - 1))
    return lo >> guard, _ceil_div(hi, 1 << guard)


@lru_cache(maxsize=1 << 16)
def g_fixed(j: int, bits: int) -> Tuple[int, int]:
    """Bounds of ``(1 - 4**-j) * zeta(2j) * 2**bits``.

    ``f_k = 4**l * g(k) * g(l-k)``, so ratios of ``f`` reduce to ratios of ``g``.
    """
    zl, zh = zeta_fixed(j, bits)
    num = (1 << (2 * j)) - 1
    return (zl * num) >> (2 * j), _ceil_div(zh * num, 1 << (2 * j))


def _f_effort_bits(effort: int) -> int:
    return 32 << effort


def f_interval(k: int, l: int, effort: int = 0) -> RealInterval:
    """Enclosure of ``f_k = (4**k - 1) zeta(2k) (4**(l-k) - 1) zeta(2(l-k))``.

    The result is identical for ``k`` and ``l - k``; widths shrink with ``effort``.
    """
    if not 1 <= k <= l - 1:
        raise ValueError("need 1 <= k <= l - 1")
    j1, j2 = sorted((k, l - k))
    bits = _f_effort_bits(effort)
    a_lo, a_hi = zeta_fixed(j1, bits)
    b_lo, b_hi = zeta_fixed(j2, bits)
    e = ((1 << (2 * j1)) - 1) * ((1 << (2 * j2)) - 1)
    return RealInterval(Fraction(e * a_lo * b_lo, 1 << (2 * bits)),
                        Fraction(e * a_hi * b_hi, 1 << (2 * bits)))


def _G_fixed(k: int, l: int, bits: int) -> Tuple[int, int]:
    """Bounds of ``g(k) g(l-k)`` scaled by ``2**(2*bits)``."""
    j1, j2 = sorted((k, l - k))
    al, ah = g_fixed(j1, bits)
    bl, bh = g_fixed(j2, bits)
    return al * bl, ah * bh


def f_ratio_target(x: int, l: int):
    """Comparison target for ``f_x / f_1``, refined by doubling precision per level."""
    if x == 1 or x == l - 1:
        return lambda level: (1, 1, 1)

    def enclose(level: int):
        bits = 16 << level
        nl, nh = _G_fixed(x, l, bits)
        dl, dh = _G_fixed(1, l, bits)
        return (nl << bits) // dh, _ceil_div(nh << bits, dl), 1 << bits

    return enclose


_BOUND_MAX_BITS = 1 << 15


def _certify_ge(a: int, b: int, l: int) -> int:
    """Smallest working precision proving ``f_a >= f_b``; raises if none is found."""
    bits = 32
    while bits <= _BOUND_MAX_BITS:
        alo, _ = _G_fixed(a, l, bits)
        _, bhi = _G_fixed(b, l, bits)
        if alo >= bhi:
            return bits
        bits *= 2
    raise RefinementLimitExceeded(f"could not order f_{a} >= f_{b} for l={l}")


def certify_weight_bounds(l: int) -> dict:
    """Certify ``f_1 >= f_k >= f_{l//2}`` and ``f_1 / f_{l//2} <= 4 pi^4 / 45``.

    Returns a summary with the certified upper bound on the ratio (as a
    Fraction) and the largest working precision any ordering needed.
    """
    if l < 2:
        raise ValueError("l must be at least 2")
    mid = l // 2
    max_bits = 32
    ordered = True
    for j in range(2, mid + 1):
        # j ranges over min(k, l-k); f_k == f_{l-k} has identical enclosures
        try:
            max_bits = max(max_bits, _certify_ge(1, j, l))
            if j != mid:
                max_bits = max(max_bits, _certify_ge(j, mid, l))
        except RefinementLimitExceeded:
            ordered = False
    bits = 64
    _, hi1 = _G_fixed(1, l, bits)
    lom, _ = _G_fixed(mid, l, bits)
    ratio_hi = Fraction(hi1, lom)
    pl, _ = pi_fixed(bits)
    bound_lo = Fraction(4 * pl ** 4, 45 * (1 << (4 * bits)))
    return {
        "l": l,
        "ordered": ordered,
        "ratio_upper": ratio_hi,
        "bound_lower": bound_lo,
        "ratio_ok": ratio_hi <= bound_lo,
        "max_bits": max_bits,
    }


# ---------------------------------------------------------------------------
# unary-binary family series
# ---------------------------------------------------------------------------

def _family_params(spec) -> Tuple[Fraction, Fraction, Fraction]:
    a = Fraction(spec.a)
    b = Fraction(spec.b)
    c = Fraction(spec.c)
    if a <= 0 or c <= 0 or b < 0:
        raise DomainError("family weights need a > 0, c > 0, b >= 0")
    alpha = b / (2 * a)
    gamma2 = c / a - alpha * alpha
    if gamma2 <= 0:
        raise DomainError("family series needs c/a - (b/2a)^2 > 0")
    return a, alpha, gamma2


def family_t_interval(spec, n: int, terms: int, bits: int = 128) -> RealInterval:
    """Enclosure of the weighted count ``t_n`` from the pole expansion of ``T``.

    With ``theta = arctan(alpha/gamma)``,
    ``t_n = n! a**n gamma**(n+1) sum_{k>=0} [x_k**-(n+1) + (-1)**(n+1) y_k**-(n+1)]``
    where ``x_k = pi(k+1/2) - theta`` and ``y_k = pi(k+1/2) + theta``.  The sum
    is truncated after ``terms`` values of ``k``; the remainder is bounded by
    ``2 (x_K**-(n+1) + x_K**-n / (n pi))``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if terms < 1:
        raise ValueError("terms must be positive")
    a, alpha, gamma2 = _family_params(spec)
    wb = bits + 16 + 2 * n.bit_length()
    pi = pi_interval(wb)
    gamma = sqrt_interval(gamma2, wb)
    if alpha == 0:
        theta = RealInterval(0, 0)
    else:
        q = (RealInterval.point(alpha) / gamma).round_out(wb)
        theta = arctan_interval(q, wb)
    e = n + 1
    total = RealInterval(0, 0)
    sign = 1 if e % 2 == 0 else -1
    for k in range(terms):
        c = pi * Fraction(2 * k + 1, 2)
        x = (c - theta).round_out(wb)
        y = (c + theta).round_out(wb)
        term = x.reciprocal() ** e
        other = y.reciprocal() ** e
        total = (total + (term + other if sign > 0 else term - other)).round_out(wb)
    xk = (pi * Fraction(2 * terms + 1, 2) - theta).round_out(wb)
    xr = xk.reciprocal()
    tail = 2 * (xr.hi ** e + xr.hi ** n / (n * pi.lo))
    total = RealInterval(total.lo - tail, total.hi + tail).round_out(wb)
    scale = Fraction(math.factorial(n)) * a ** n
    return (total * (gamma ** e).round_out(wb) * scale).round_out(bits)


def strict_asymptotic(n: int, bits: int = None) -> RealInterval:
    """Enclosure of ``2 (2/pi)**(n+1) n!``, the leading term of ``t_n`` for odd ``n``."""
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    if bits is None:
        bits = 64 + 4 * n
    pi = pi_interval(bits)
    return 2 * math.factorial(n) * (Fraction(2) / pi) ** (n + 1)
