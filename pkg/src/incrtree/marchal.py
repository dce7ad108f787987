"""Uniform alternating sequences by a trigonometry-free Marchal chain.

One attempt draws ``n`` uniforms ``r_i`` and runs

    D[0] = 1 - sin(pi r_0 / 2)**2,    D[i+1] = r_{i+1}**2 (1 - D[i]),

then accepts forwards with probability ``1/(a + 1/a)``, backwards with the
same probability, and restarts otherwise, where
``a = sqrt((1 - D[n-1]) / (1 - D[0]))``.  The accepted sequence
``(1-D[0], D[1], 1-D[2], ...)`` (or its mirror) is uniform on alternating
sequences, so its rank permutation is a uniform down-up permutation and the
min-rooted tree built from it is a uniform strictly increasing binary tree.

Every real is carried as a certified fixed-point enclosure.  Uniforms hold
``p`` random bits; when the accept test or the final ordering cannot be
decided at the current precision the *same* uniforms are refined by one more
bit.  A restart throws all uniforms away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import AmbiguousOrder, EvenSize, RefinementLimitExceeded
from .exactnum import pi_fixed
from .rng_bits import DEFAULT_REFINEMENT_CAP, BitSource, LazyUniform
from .tree_model import AltSequence, IncreasingTree, tree_from_permutation

__all__ = [
    "FORWARD",
    "REVERSED",
    "RESTART",
    "GUARD_BITS",
    "MarchalStats",
    "MarchalRun",
    "initial_precision",
    "sin_fixed",
    "threshold_sq_bounds",
    "sample_sequence",
    "sample_permutation",
    "sample_tree",
    "chain_sample",
    "acceptance_trial",
]

FORWARD = "forward"
REVERSED = "reversed"
RESTART = "restart"

GUARD_BITS = 8
DEFAULT_KAPPA = 3
DEFAULT_EPS = Fraction(1, 2)


@dataclass
class MarchalStats:
    attempts: int = 0
    restarts: int = 0
    bumps: int = 0
    forward: int = 0
    reversed: int = 0
    bits: int = 0


def initial_precision(n: int, eps=DEFAULT_EPS, kappa: int = DEFAULT_KAPPA) -> int:
    """Starting number of bits per uniform: ``2 log2 n + log2 ln n + kappa + log2(1/eps)``.

    Only a performance heuristic; the sampler refines adaptively anyway.
    Never below ``floor(log2 n) + 2``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    ln_n = math.log(n) if n > 1 else 0.0
    delta = 2 * math.log2(n) + math.log2(max(1.0, ln_n)) + kappa + math.log2(1 / eps)
    return max(math.ceil(delta), n.bit_length() + 1)


def sin_fixed(x: int, bits: int) -> Tuple[int, int]:
    """Bounds of ``sin(x / 2**bits) * 2**bits`` for ``0 <= x``.

    Taylor series with the Lagrange remainder ``|x|**(2K+1) / (2K+1)!``;
    every product is floored (lower chain) or ceiled (upper chain).
    """
    S = 1 << bits
    x2l = (x * x) >> bits
    x2h = -((-x * x) >> bits)
    tl = th = x
    sl = sh = x
    k = 1
    while True:
        d = (2 * k) * (2 * k + 1) << bits
        tl = (tl * x2l) // d
        th = -((-th * x2h) // d)
        if th <= 1:
            sl -= th
            sh += th
            break
        if k & 1:
            sl -= th
            sh -= tl
        else:
            sl += tl
            sh += th
        k += 1
    return max(sl, 0), min(sh, S)


def _phi(x: int, y: int) -> Tuple[int, int]:
    s = x + y
    return (x * y, s * s) if s else (0, 1)


def threshold_sq_bounds(xl: int, xh: int, yl: int, yh: int):
    """Exact bounds ``(lo_num, lo_den), (hi_num, hi_den)`` of ``threshold**2``.

    With ``x = 1 - D[0]`` and ``y = 1 - D[n-1]``, ``threshold = 1/(a + 1/a)``
    and ``a**2 = y / x`` give ``threshold**2 = x y / (x + y)**2``, a function of
    ``y/x`` that increases up to ``y/x = 1`` (value 1/4) and decreases after.
    """
    c1 = _phi(xh, yl)
    c2 = _phi(xl, yh)
    lo = c1 if c1[0] * c2[1] <= c2[0] * c1[1] else c2
    if yl <= xh and xl <= yh:
        hi = (1, 4)
    else:
        hi = c2 if c1[0] * c2[1] <= c2[0] * c1[1] else c1
    return lo, hi


class MarchalRun:
    """State of one sampling run: persistent uniforms, D enclosures, precision."""

    def __init__(self, n: int, src: BitSource, p: int,
                 cap: int = DEFAULT_REFINEMENT_CAP):
        if n < 2:
            raise ValueError("a chain needs n >= 2")
        self.n = n
        self.src = src
        self.p = p
        self.cap = cap
        self.stats = MarchalStats()
        self.draw()

    @property
    def bits(self) -> int:
        """Working fixed-point precision of the D enclosures."""
        return self.p + GUARD_BITS

    def draw(self) -> None:
        """Fresh uniforms at the current precision (start or restart)."""
        self.U = [self.src.take(self.p) for _ in range(self.n)]
        self.proba = LazyUniform(self.src)
        self.stats.attempts += 1
        self.run_chain()

    def bump(self) -> None:
        """Refine every persistent uniform by one bit and recompute the chain."""
        if self.p >= self.cap:
            raise RefinementLimitExceeded(f"Marchal chain needs more than {self.cap} bits")
        self.U = [(u << 1) | self.src.take(1) for u in self.U]
        self.p += 1
        self.stats.bumps += 1
        self.run_chain()

    def run_chain(self) -> None:
        p, W = self.p, self.bits
        S = 1 << W
        pl, ph = pi_fixed(W)
        a = self.U[0]
        # x = (pi / 2) r over r in [a, a+1] / 2**p
        s_lo, _ = sin_fixed((pl * a) >> (p + 1), W)
        _, s_hi = sin_fixed(-((-ph * (a + 1)) >> (p + 1)), W)
        lo = [0] * self.n
        hi = [0] * self.n
        lo[0] = max(0, S - -((-s_hi * s_hi) >> W))
        hi[0] = min(S, S - ((s_lo * s_lo) >> W))
        sh = 2 * p
        plo, phi = lo[0], hi[0]
        U = self.U
        for i in range(1, self.n):
            u = U[i]
            v = u + 1
            plo, phi = (u * u * (S - phi)) >> sh, -((-v * v * (S - plo)) >> sh)
            if phi > S:
                phi = S
            lo[i] = plo
            hi[i] = phi
        self.D_lo = lo
        self.D_hi = hi

    def threshold_sq(self):
        S = 1 << self.bits
        xl, xh = S - self.D_hi[0], S - self.D_lo[0]
        yl, yh = S - self.D_hi[-1], S - self.D_lo[-1]
        return threshold_sq_bounds(xl, xh, yl, yh)

    def decide(self) -> Optional[str]:
        """Classify ``proba`` at the current enclosures, or None if undecided."""
        (ln, ld), (hn, hd) = self.threshold_sq()
        b, q = self.proba.num, self.proba.p
        b2 = b * b
        b12 = (b + 1) * (b + 1)
        four_q = 1 << (2 * q)
        if b12 * ld <= ln * four_q:
            return FORWARD
        if b2 * hd >= hn * four_q:
            if b12 * ld <= 4 * ln * four_q:
                return REVERSED
            if b2 * hd >= 4 * hn * four_q:
                return RESTART
        return None

    def accept_direction(self) -> str:
        """Lazily compare ``proba`` with ``threshold`` and ``2 * threshold``."""
        while True:
            verdict = self.decide()
            if verdict is not None:
                return verdict
            if self.proba.p <= self.p:
                if self.proba.p >= self.cap:
                    raise RefinementLimitExceeded("proba refined past the cap")
                self.proba.extend(1)
            else:
                self.bump()

    def assemble(self, direction: str) -> Tuple[List[int], List[int]]:
        """Enclosures of ``Y`` for an accepted direction."""
        S = 1 << self.bits
        lo, hi = self.D_lo, self.D_hi
        n = self.n
        idx = range(n) if direction == FORWARD else range(n - 1, -1, -1)
        ylo, yhi = [], []
        for pos, i in enumerate(idx):
            if pos % 2 == 0:
                ylo.append(S - hi[i])
                yhi.append(S - lo[i])
            else:
                ylo.append(lo[i])
                yhi.append(hi[i])
        return ylo, yhi


def _separated(ylo: List[int], yhi: List[int]) -> bool:
    order = sorted(range(len(ylo)), key=ylo.__getitem__)
    return all(yhi[a] < ylo[b] for a, b in zip(order, order[1:]))


def sample_sequence(n: int, src: BitSource, eps=DEFAULT_EPS, kappa: int = DEFAULT_KAPPA,
                    stats: Optional[MarchalStats] = None,
                    cap: int = DEFAULT_REFINEMENT_CAP) -> AltSequence:
    """A uniform alternating sequence of length ``n`` with pairwise separated enclosures."""
    if n < 1:
        raise ValueError("n must be positive")
    start_bits = src.bits_consumed
    if n == 1:
        if stats is not None:
            stats.attempts += 1
            stats.forward += 1
        return AltSequence((0,), (1,), 0)
    run = MarchalRun(n, src, initial_precision(n, eps, kappa), cap)
    while True:
        direction = run.accept_direction()
        if direction != RESTART:
            break
        run.stats.restarts += 1
        run.draw()
    while True:
        ylo, yhi = run.assemble(direction)
        if _separated(ylo, yhi):
            break
        run.bump()
    if stats is not None:
        st = run.stats
        stats.attempts += st.attempts
        stats.restarts += st.restarts
        stats.bumps += st.bumps
        if direction == FORWARD:
            stats.forward += 1
        else:
            stats.reversed += 1
        stats.bits += src.bits_consumed - start_bits
    seq = AltSequence(tuple(ylo), tuple(yhi), run.bits)
    _check_alternation(seq)
    return seq


def _check_alternation(seq: AltSequence) -> None:
    lo, hi = seq.lows, seq.highs
    for i in range(len(lo) - 1):
        if i % 2 == 0:
            ok = hi[i + 1] < lo[i]
        else:
            ok = hi[i] < lo[i + 1]
        if not ok:
            raise AmbiguousOrder(f"sequence does not alternate at position {i}")


def sample_permutation(n: int, src: BitSource, **kw) -> Tuple[int, ...]:
    from .tree_model import perm_from_sequence
    return perm_from_sequence(sample_sequence(n, src, **kw)).perm


def sample_tree(n: int, src: BitSource, eps=DEFAULT_EPS, kappa: int = DEFAULT_KAPPA,
                stats: Optional[MarchalStats] = None) -> IncreasingTree:
    """Uniform strictly increasing binary tree of odd size ``n``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2 == 0:
        raise EvenSize(f"no strictly increasing binary tree has even size {n}")
    seq = sample_sequence(n, src, eps, kappa, stats)
    return tree_from_permutation(seq.ranks())


def chain_sample(n: int, src: BitSource, p: Optional[int] = None) -> MarchalRun:
    """One unconditioned chain (no accept/reject) with fresh uniforms."""
    return MarchalRun(n, src, p if p is not None else initial_precision(n))


def acceptance_trial(n: int, src: BitSource, p: Optional[int] = None) -> str:
    """Run one attempt and return its verdict (forward, reversed or restart)."""
    return chain_sample(n, src, p).accept_direction()
