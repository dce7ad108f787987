"""Acceptance criteria, one test per criterion.

Each test prints a line ``PASS [n] ...`` or ``FAIL [n] ...`` to the terminal
even when pytest captures output.  Run ``python3 tests/test_acceptance.py`` to
get just the ten lines.
"""

import itertools
import math
import subprocess
import sys
import time
from fractions import Fraction

import pytest
from scipy import integrate

from incrtree.exactnum import certify_weight_bounds, family_counts, family_t_interval, tangent_counts
from incrtree.family import asymptotic_interval, make_spec
from incrtree.sampling import SampleConfig
from incrtree.stats import (arcsine_cdf, arcsine_density, arcsine_suite, accept_rate_suite,
                            bit_report, chi_square, chi_square_two_sample, mdist_suite,
                            tree_histogram, uniformity_suite)
from incrtree.tree_model import alternating_permutations, canonical_key, enumerate_strict_trees

SEED = 20240601


def _down_up_count(n):
    # independent brute force, no library code involved
    return sum(all((p[i] > p[i + 1]) == (i % 2 == 0) for i in range(n - 1))
               for p in itertools.permutations(range(n)))


def criterion_1():
    t0 = time.perf_counter()
    t = tangent_counts(9)
    ok = t[1:10] == [1, 0, 2, 0, 16, 0, 272, 0, 7936]
    for n in (1, 3, 5, 7):
        ok &= t[n] == _down_up_count(n) == sum(1 for _ in alternating_permutations(n))
    dt = time.perf_counter() - t0
    return ok and dt < 1, f"t_1..t_9 = {t[1:10]}, odd n <= 7 match brute force, {dt:.2f}s"


def criterion_2():
    t0 = time.perf_counter()
    worst = Fraction(0)
    ok = True
    for l in range(2, 1001):
        r = certify_weight_bounds(l)
        ok &= r["ordered"] and r["ratio_ok"]
        worst = max(worst, r["ratio_upper"])
    dt = time.perf_counter() - t0
    return ok and dt < 30, f"l = 2..1000 certified, max f_1/f_mid <= {float(worst):.4f}, {dt:.1f}s"


def criterion_3():
    t0 = time.perf_counter()
    parts = []
    ok = True
    for n in (5, 7, 9, 21, 41):
        r = mdist_suite(n, 10_000, SEED + n)
        ok &= r.passed
        parts.append(f"n={n} p={r.p_value:.3g} it={r.categories[-1]['mean_iterations']:.2f}")
    dt = time.perf_counter() - t0
    return ok and dt < 60, "; ".join(parts) + f"; {dt:.1f}s"


def _uniform_probs(n):
    trees = enumerate_strict_trees(n)
    return sorted(canonical_key(t) for t in trees), Fraction(1, len(trees))


def criterion_4():
    t0 = time.perf_counter()
    ok = True
    parts = []
    hist7 = {}
    for n, reps in ((5, 16_000), (7, 272_000)):
        keys, q = _uniform_probs(n)
        for i, model in enumerate(("marchal", "recursive")):
            hist, _ = tree_histogram(SampleConfig(model, n), reps, SEED + 10 * n + i)
            stray = sum(hist.values()) - sum(hist.get(k, 0) for k in keys)
            _, p = chi_square([hist.get(k, 0) for k in keys], [q] * len(keys))
            ok &= stray == 0 and p > 1e-3
            parts.append(f"{model} n={n} p={p:.3g}")
            if n == 7:
                hist7[model] = [hist.get(k, 0) for k in keys]
    _, p2 = chi_square_two_sample(hist7["marchal"], hist7["recursive"])
    ok &= p2 > 1e-3
    dt = time.perf_counter() - t0
    return ok and dt < 300, "; ".join(parts) + f"; two-sample n=7 p={p2:.3g}; {dt:.0f}s"


def criterion_5():
    parts = []
    ok = True
    for n in (11, 101, 1001):
        r = accept_rate_suite(n, 10_000, SEED + n)
        ok &= r.passed
        parts.append(f"n={n} rate={r.statistic:.3f}")
    return ok, "; ".join(parts) + " (floor 0.19)"


def _ds(z):
    # limiting density as first derived, before simplification
    return (math.sqrt(1 - z) / math.sqrt(z) + math.sqrt(z) / math.sqrt(1 - z)) / math.pi


def criterion_6():
    r = arcsine_suite(10_000, SEED)
    # z = sin(t)^2 turns the singular density into a smooth integrand
    worst = 0.0
    for z in [i / 20 for i in range(1, 20)] + [1e-6, 1 - 1e-6]:
        val, _ = integrate.quad(lambda s: _ds(math.sin(s) ** 2) * math.sin(2 * s),
                                0.0, math.asin(math.sqrt(z)), epsabs=1e-13, epsrel=1e-13)
        worst = max(worst, abs(val - arcsine_cdf(z)),
                    abs(_ds(z) - arcsine_density(z)) * math.sqrt(z * (1 - z)))
    ok = r.passed and worst < 1e-8
    raw = r.categories[1]["ks"]
    return ok, (f"KS(symmetrized D[50], arcsine) = {r.statistic:.4f}, "
                f"KS(raw D[50], chain marginal) = {raw:.4f}, quadrature error {worst:.1e}")


def criterion_7():
    t0 = time.perf_counter()
    ok = True
    parts = []
    for model in ("marchal", "recursive"):
        floor = bit_report(model, [5, 21, 65, 129], 200, SEED, max_spread=math.inf)
        big = bit_report(model, [101, 1001, 10001], 10, SEED)
        ok &= floor.passed and big.passed
        ratios = ", ".join(f"{row['bits_per_nlogn']:.3f}" for row in big.categories)
        parts.append(f"{model} bits/(n log2 n) = {ratios} (spread {big.statistic:.2f})")
    dt = time.perf_counter() - t0
    return ok and dt < 300, "; ".join(parts) + f"; entropy floor met for n <= 129; {dt:.0f}s"


def criterion_8():
    spec = make_spec(1, 1, 1)
    r = uniformity_suite("family", 4, 9_000, SEED, spec=spec)
    weight = family_counts(1, 1, 1, 4)[4]
    ok = r.passed and weight == 9
    for abc in ((1, 0, 1), (1, 1, 1), (Fraction(1, 2), 0, 1), (2, 1, 3)):
        exact = family_counts(*abc, 64)
        s = make_spec(*abc)
        ok &= all(exact[n] in family_t_interval(s, n, terms=4) for n in range(1, 65))
    ratio = family_counts(1, 1, 1, 30)[30] / asymptotic_interval(spec, 30).mid
    ok &= abs(float(ratio) - 1) < 0.05
    return ok, (f"(1,1,1) n=4 census weight {weight}, p={r.p_value:.3g}; "
                f"enclosures hold for n <= 64 on 4 specs; t_30 / asymptotic = {float(ratio):.4f}")


CLI_RUNS = [
    ["sample", "--model", "recursive", "--size", "5", "--count", "3", "--seed", "7"],
    ["sample", "--model", "marchal", "--size", "101", "--count", "5", "--seed", "7",
     "--format", "json"],
    ["sample", "--model", "marchal", "--size", "9", "--count", "4", "--seed", "1",
     "--format", "perm", "--eps", "1/8"],
    ["sample", "--model", "family", "--a", "1", "--b", "1", "--c", "1", "--size", "12",
     "--count", "4", "--seed", "3", "--format", "dot"],
    ["sample", "--model", "recursive", "--size", "21", "--count", "6", "--seed", "9",
     "--jobs", "2"],
    ["enumerate", "--model", "family", "--b", "2", "--c", "3", "--size", "5"],
    ["stats", "--suite", "uniformity", "--size", "5", "--reps", "500", "--seed", "2"],
]


def _cli(argv):
    res = subprocess.run([sys.executable, "-m", "incrtree", *argv], capture_output=True)
    return res.returncode, res.stdout, res.stderr


def criterion_9():
    ok = True
    for argv in CLI_RUNS:
        first, second = _cli(argv), _cli(argv)
        ok &= first[0] == 0 and first == second
    bench = ["bench", "--sizes", "5,21", "--reps", "3", "--seed", "4"]
    cols = [[line.split(b",")[2] for line in _cli(bench)[1].splitlines()] for _ in range(2)]
    ok &= cols[0] == cols[1]
    return ok, f"{len(CLI_RUNS)} invocations byte-identical across reruns, bench bit columns equal"


def criterion_10():
    r5 = uniformity_suite("biased", 5, 16_000, SEED)
    r7 = uniformity_suite("biased", 7, 27_200, SEED)
    ok = r5.p_value < 1e-6 and r7.p_value < 1e-6
    return ok, f"biased sampler p = {r5.p_value:.3g} (n=5), {r7.p_value:.3g} (n=7)"


CRITERIA = {
    1: ("counting oracle", criterion_1),
    2: ("subtree weight bound certified", criterion_2),
    3: ("left subtree size law", criterion_3),
    4: ("uniformity of both samplers", criterion_4),
    5: ("chain acceptance rate", criterion_5),
    6: ("arcsine limit law", criterion_6),
    7: ("random bit complexity", criterion_7),
    8: ("weighted family correctness", criterion_8),
    9: ("CLI reproducibility", criterion_9),
    10: ("negative control", criterion_10),
}


def _line(k):
    name, fn = CRITERIA[k]
    try:
        ok, detail = fn()
    except Exception as exc:  # report, then let the test fail
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return ok, f"{'PASS' if ok else 'FAIL'} [{k}] {name}: {detail}"


@pytest.mark.slow
@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    ok, line = _line(k)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_line(k) for k in sorted(CRITERIA)]
    for _, line in results:
        print(line, flush=True)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
