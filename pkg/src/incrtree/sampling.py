"""One entry point for all samplers, plus reproducible batch sampling.

Replica ``i`` of a batch always reads the bit stream ``BitSource(seed, i)``,
so a batch gives the same output whether it runs in one process or many.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional

from . import family, marchal, recursive
from .errors import DomainError, EvenSize
from .rng_bits import BitSource
from .tree_model import IncreasingTree

__all__ = ["MODELS", "SampleConfig", "Draw", "draw", "sample_batch"]

MODELS = ("marchal", "recursive", "family")
# samplers only meant for the statistics harness
CONTROL_MODELS = ("biased",)


@dataclass(frozen=True)
class SampleConfig:
    model: str
    n: int
    eps: Fraction = marchal.DEFAULT_EPS
    kappa: int = marchal.DEFAULT_KAPPA
    spec: Optional[family.FamilySpec] = None

    def __post_init__(self):
        if self.model not in MODELS + CONTROL_MODELS:
            raise DomainError(f"unknown model {self.model!r}")
        if self.n < 1:
            raise DomainError("size must be positive")
        if self.model == "family":
            if self.spec is None:
                raise DomainError("model family needs weights a, b, c")
            if self.spec.b == 0 and self.n % 2 == 0:
                raise EvenSize(f"size {self.n} is even and b = 0, so no tree exists")
        elif self.n % 2 == 0:
            raise EvenSize(f"size {self.n} is even; strict binary trees need odd size")


@dataclass
class Draw:
    tree: IncreasingTree
    bits: int
    restarts: int = 0
    extra: dict = field(default_factory=dict)


def draw(cfg: SampleConfig, src: BitSource) -> Draw:
    """Sample one tree and report the bits it used."""
    start = src.bits_consumed
    restarts = 0
    if cfg.model == "marchal":
        st = marchal.MarchalStats()
        tree = marchal.sample_tree(cfg.n, src, cfg.eps, cfg.kappa, st)
        restarts = st.restarts
    elif cfg.model == "recursive":
        tree = recursive.sample_tree(cfg.n, src)
    elif cfg.model == "biased":
        tree = recursive.sample_tree(cfg.n, src, split=recursive._leftmost_split)
    else:
        tree = family.sample_tree(cfg.spec, cfg.n, src)
    return Draw(tree, src.bits_consumed - start, restarts)


def _chunk(args):
    cfg, seed, lo, hi, emit = args
    out = []
    for i in range(lo, hi):
        d = draw(cfg, BitSource(seed, i))
        out.append(emit(d) if emit is not None else d)
    return out


def sample_batch(cfg: SampleConfig, count: int, seed: int, jobs: int = 1,
                 emit: Optional[Callable[[Draw], object]] = None) -> List:
    """``count`` independent draws in replica order.

    ``emit`` (a module-level function when ``jobs > 1``) maps each draw to
    what is returned, which keeps inter-process traffic small.
    """
    if count < 0:
        raise DomainError("count must be non-negative")
    if jobs <= 1 or count < 2:
        return _chunk((cfg, seed, 0, count, emit))
    step = max(1, -(-count // (4 * jobs)))
    parts = [(cfg, seed, lo, min(count, lo + step), emit) for lo in range(0, count, step)]
    out: List = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for res in pool.map(_chunk, parts):
            out.extend(res)
    return out
