"""Goodness-of-fit tests and the named verification suites.

The p-values come from an in-repo regularized incomplete gamma function, so
the harness needs nothing beyond the standard library.  Every suite returns a
:class:`TestReport` whose JSON form is

    {test, n, reps, seed, statistic, p_value, pass, bits_total, categories}
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import family, marchal, recursive
from .errors import InvalidExpectation
from .exactnum import tangent_counts
from .rng_bits import BitSource
from .sampling import Draw, SampleConfig, sample_batch
from .tree_model import (canonical_key, enumerate_family_trees, enumerate_strict_trees,
                         strip_decorations)

__all__ = [
    "SIGNIFICANCE",
    "TestReport",
    "gammaincc",
    "chi2_sf",
    "chi_square",
    "chi_square_two_sample",
    "ks_statistic",
    "arcsine_cdf",
    "arcsine_density",
    "chain_marginal_cdf",
    "uniformity_suite",
    "two_sample_suite",
    "mdist_suite",
    "arcsine_suite",
    "accept_rate_suite",
    "bit_report",
    "SUITES",
]

SIGNIFICANCE = 1e-3


@dataclass
class TestReport:
    test: str
    n: object
    reps: int
    seed: int
    statistic: float
    p_value: Optional[float]
    passed: bool
    bits_total: int = 0
    categories: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return {k: d[k] for k in ("test", "n", "reps", "seed", "statistic", "p_value",
                                  "pass", "bits_total", "categories")}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

def _gammainc_series(s: float, x: float) -> float:
    term = 1.0 / s
    total = term
    a = s
    for _ in range(10000):
        a += 1
        term *= x / a
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))


def _gammaincc_cf(s: float, x: float) -> float:
    # modified Lentz evaluation of the continued fraction for Q(s, x)
    tiny = 1e-300
    b = x + 1 - s
    c = 1 / tiny
    d = 1 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - s)
        b += 2
        d = an * d + b
        d = tiny if abs(d) < tiny else d
        c = b + an / c
        c = tiny if abs(c) < tiny else c
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < 1e-16:
            break
    return h * math.exp(-x + s * math.log(x) - math.lgamma(s))


def gammaincc(s: float, x: float) -> float:
    """Regularized upper incomplete gamma ``Q(s, x) = Gamma(s, x) / Gamma(s)``."""
    if s <= 0:
        raise ValueError("s must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0
    if x < s + 1:
        return max(0.0, 1.0 - _gammainc_series(s, x))
    return _gammaincc_cf(s, x)


def chi2_sf(x: float, df: int) -> float:
    """Upper tail ``P(chi2_df > x)``."""
    if df <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return gammaincc(df / 2, x / 2)


def chi_square(observed: Sequence[int], expected: Sequence) -> Tuple[float, float]:
    """Pearson statistic and p-value of counts against category probabilities.

    Categories with zero probability and zero count are dropped; a positive
    count in a zero-probability category gives an infinite statistic.
    """
    if len(observed) != len(expected):
        raise InvalidExpectation("observed and expected differ in length")
    if not expected:
        raise InvalidExpectation("no categories")
    probs = list(expected)
    if any(p < 0 for p in probs):
        raise InvalidExpectation("negative probability")
    total_p = sum(probs)
    if isinstance(total_p, Fraction) and all(isinstance(p, (int, Fraction)) for p in probs):
        ok = total_p == 1
    else:
        ok = abs(float(total_p) - 1.0) <= 1e-12
    if not ok:
        raise InvalidExpectation(f"probabilities sum to {float(total_p)!r}, not 1")
    N = sum(observed)
    live = [(o, float(p)) for o, p in zip(observed, probs) if p > 0 or o > 0]
    if N < 5 * len(live):
        raise InvalidExpectation(
            f"{N} observations are too few for {len(live)} categories (need 5 per category)")
    stat = 0.0
    for o, p in live:
        if p == 0:
            return math.inf, 0.0
        e = N * p
        stat += (o - e) ** 2 / e
    df = sum(1 for _, p in live if p > 0) - 1
    return stat, chi2_sf(stat, df)


def chi_square_two_sample(a: Sequence[int], b: Sequence[int]) -> Tuple[float, float]:
    """Homogeneity test of two histograms over the same categories."""
    if len(a) != len(b):
        raise InvalidExpectation("histograms differ in length")
    na, nb = sum(a), sum(b)
    if na == 0 or nb == 0:
        raise InvalidExpectation("empty histogram")
    ra, rb = math.sqrt(nb / na), math.sqrt(na / nb)
    stat = 0.0
    k = 0
    for x, y in zip(a, b):
        if x + y == 0:
            continue
        k += 1
        stat += (x * ra - y * rb) ** 2 / (x + y)
    return stat, chi2_sf(stat, k - 1)


def ks_statistic(samples: Sequence[float], cdf: Callable[[float], float]) -> float:
    """Largest distance between the empirical CDF of ``samples`` and ``cdf``."""
    xs = sorted(samples)
    n = len(xs)
    if n == 0:
        raise ValueError("no samples")
    d = 0.0
    for i, x in enumerate(xs):
        f = cdf(x)
        d = max(d, (i + 1) / n - f, f - i / n)
    return d


def arcsine_cdf(z: float) -> float:
    """``(2/pi) arcsin(sqrt z)`` on ``[0, 1]``."""
    if not 0 <= z <= 1:
        raise ValueError("z must lie in [0, 1]")
    return 2 / math.pi * math.asin(math.sqrt(z))


def arcsine_density(z: float) -> float:
    """``(sqrt((1-z)/z) + sqrt(z/(1-z))) / pi``, which equals ``1/(pi sqrt(z(1-z)))``."""
    return (math.sqrt((1 - z) / z) + math.sqrt(z / (1 - z))) / math.pi


def chain_marginal_cdf(z: float) -> float:
    """Limit law of ``D[i]`` itself, density ``2 sqrt((1-z)/z) / pi``.

    Mixing it half and half with the law of ``1 - D[i]`` gives the arcsine law.
    """
    if not 0 <= z <= 1:
        raise ValueError("z must lie in [0, 1]")
    return 2 / math.pi * (math.asin(math.sqrt(z)) + math.sqrt(z * (1 - z)))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _key(d: Draw) -> Tuple[str, int]:
    return canonical_key(strip_decorations(d.tree)), d.bits


def _census(cfg: SampleConfig) -> Dict[str, Fraction]:
    if cfg.model == "family":
        spec = cfg.spec
        trees = enumerate_family_trees(spec.a, spec.b, spec.c, cfg.n)
        total = sum(w for _, w in trees)
        return {canonical_key(t): Fraction(w, total) for t, w in trees}
    trees = enumerate_strict_trees(cfg.n)
    return {canonical_key(t): Fraction(1, len(trees)) for t in trees}


def tree_histogram(cfg: SampleConfig, reps: int, seed: int, jobs: int = 1):
    """Counts per canonical key and total bits of ``reps`` seeded draws."""
    res = sample_batch(cfg, reps, seed, jobs, emit=_key)
    return Counter(k for k, _ in res), sum(b for _, b in res)


def uniformity_suite(model: str, n: int, reps: int, seed: int,
                     spec: Optional[family.FamilySpec] = None, jobs: int = 1,
                     alpha: float = SIGNIFICANCE) -> TestReport:
    """Chi-square of sampled trees against the enumerated (weighted) census."""
    cfg = SampleConfig(model, n, spec=spec)
    census = _census(cfg)
    hist, bits = tree_histogram(cfg, reps, seed, jobs)
    keys = sorted(census)
    stray = sum(c for k, c in hist.items() if k not in census)
    observed = [hist.get(k, 0) for k in keys]
    probs = [census[k] for k in keys]
    if stray:
        stat, p = math.inf, 0.0
    else:
        stat, p = chi_square(observed, probs)
    cats = [{"key": k, "observed": o, "expected": float(q) * reps}
            for k, o, q in zip(keys, observed, probs)]
    return TestReport(f"uniformity:{model}", n, reps, seed, stat, p, p > alpha, bits, cats)


def two_sample_suite(model_a: str, model_b: str, n: int, reps: int, seed: int,
                     jobs: int = 1, alpha: float = SIGNIFICANCE) -> TestReport:
    """Homogeneity of two samplers' tree histograms (independent seeds per sampler)."""
    ha, ba = tree_histogram(SampleConfig(model_a, n), reps, seed, jobs)
    hb, bb = tree_histogram(SampleConfig(model_b, n), reps, seed + 1, jobs)
    keys = sorted(set(ha) | set(hb))
    stat, p = chi_square_two_sample([ha[k] for k in keys], [hb[k] for k in keys])
    cats = [{"key": k, model_a: ha[k], model_b: hb[k]} for k in keys]
    return TestReport(f"two-sample:{model_a}:{model_b}", n, reps, seed, stat, p,
                      p > alpha, ba + bb, cats)


def mdist_suite(n: int, reps: int, seed: int, alpha: float = SIGNIFICANCE,
                max_mean_iterations: float = 9.0) -> TestReport:
    """Left subtree size law of the strict model against the exact distribution.

    Passes when the chi-square p-value exceeds ``alpha`` and the mean number
    of proposals per draw stays at or below ``max_mean_iterations``.
    """
    l = (n + 1) // 2
    src = BitSource(seed)
    st = recursive.MSampleStats()
    hist = Counter(recursive.sample_M(l, src, st)[0] for _ in range(reps))
    exact = recursive.exact_M_distribution(n)
    ms = list(range(1, n - 1, 2))
    stray = sum(c for m, c in hist.items() if m not in ms)
    observed = [hist[m] for m in ms]
    probs = [exact[m] for m in ms]
    stat, p = (math.inf, 0.0) if stray else chi_square(observed, probs)
    mean_it = st.iterations / reps
    cats = [{"m": m, "observed": o, "expected": float(q) * reps} for m, o, q in zip(ms, observed, probs)]
    cats.append({"mean_iterations": mean_it, "refinements": st.refinements})
    return TestReport("mdist", n, reps, seed, stat, p,
                      p > alpha and mean_it <= max_mean_iterations, src.bits_consumed, cats)


def _d_midpoint(run: marchal.MarchalRun, i: int) -> float:
    return (run.D_lo[i] + run.D_hi[i]) / 2 ** (run.bits + 1)


def arcsine_suite(reps: int, seed: int, n: int = 51, index: int = 50,
                  tolerance: float = 0.02) -> TestReport:
    """KS distance of the chain marginal at ``index`` from the arcsine law.

    The alternating sequence uses ``D[i]`` at odd positions and ``1 - D[i]``
    at even ones; a fair coin picks one of the two, which yields the
    symmetric limit law.  The raw ``D[index]`` is reported against its own
    limit :func:`chain_marginal_cdf` in ``categories``.
    """
    src = BitSource(seed)
    raw, sym = [], []
    for _ in range(reps):
        run = marchal.chain_sample(n, src)
        d = _d_midpoint(run, index)
        raw.append(d)
        sym.append(1 - d if src.bit() else d)
    ks_sym = ks_statistic(sym, arcsine_cdf)
    ks_raw = ks_statistic(raw, chain_marginal_cdf)
    ks_raw_arcsine = ks_statistic(raw, arcsine_cdf)
    cats = [{"sample": "symmetrized", "law": "arcsine", "ks": ks_sym},
            {"sample": "raw", "law": "chain-marginal", "ks": ks_raw},
            {"sample": "raw", "law": "arcsine", "ks": ks_raw_arcsine}]
    return TestReport("arcsine", n, reps, seed, ks_sym, None,
                      ks_sym <= tolerance and ks_raw <= tolerance, src.bits_consumed, cats)


def accept_rate_suite(n: int, reps: int, seed: int, floor: float = 0.19) -> TestReport:
    """Fraction of chain attempts accepted (either direction)."""
    src = BitSource(seed)
    verdicts = Counter(marchal.acceptance_trial(n, src) for _ in range(reps))
    acc = (verdicts[marchal.FORWARD] + verdicts[marchal.REVERSED]) / reps
    cats = [{"verdict": v, "count": verdicts[v]}
            for v in (marchal.FORWARD, marchal.REVERSED, marchal.RESTART)]
    return TestReport("accept-rate", n, reps, seed, acc, None, acc >= floor,
                      src.bits_consumed, cats)


def bit_report(model: str, sizes: Sequence[int], reps: int, seed: int,
               max_spread: float = 2.0, max_ratio: float = 8.0) -> TestReport:
    """Random bits per tree against ``n log2 n`` and, where known, ``log2 t_n``.

    ``statistic`` is the spread max/min of ``bits / (n log2 n)`` over sizes.
    """
    rows = []
    total = 0
    ok = True
    for n in sizes:
        cfg = SampleConfig(model, n)
        bits = [d.bits for d in sample_batch(cfg, reps, seed)]
        mean = sum(bits) / reps
        total += sum(bits)
        row = {"size": n, "mean_bits": mean,
               "bits_per_nlogn": mean / (n * math.log2(n)) if n > 1 else 0.0}
        if n <= 129:
            floor = math.log2(tangent_counts(n)[n])
            row["entropy_floor"] = floor
            ok &= mean >= floor
        ok &= row["bits_per_nlogn"] <= max_ratio
        rows.append(row)
    ratios = [r["bits_per_nlogn"] for r in rows if r["bits_per_nlogn"] > 0]
    spread = max(ratios) / min(ratios) if ratios else 1.0
    ok &= spread <= max_spread
    return TestReport(f"bits:{model}", list(sizes), reps, seed, spread, None, ok, total, rows)


SUITES = ("uniformity", "mdist", "arcsine", "accept-rate", "bits")
